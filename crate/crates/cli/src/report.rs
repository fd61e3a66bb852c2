use crate::artifact::{read_text, write_atomic};
use crate::commands::Ctx;
use crate::error::CliError;
use serde_json::Value;
use std::fmt::Write;
use std::path::Path;

fn load(dir: &Path, name: &str) -> Result<Option<Value>, CliError> {
    let p = dir.join(name);
    if !p.exists() {
        return Ok(None);
    }
    let v = serde_json::from_str(&read_text(&p)?).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
    Ok(Some(v))
}

fn arr(v: &Value) -> &[Value] {
    v.as_array().map(Vec::as_slice).unwrap_or(&[])
}

fn fmt_fingerprint(v: &Value) -> String {
    arr(v)
        .iter()
        .take(3)
        .map(|z| format!("{:.4}{:+.4}i", z[0].as_f64().unwrap_or(0.0), z[1].as_f64().unwrap_or(0.0)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn stabilizer(v: &Value) -> String {
    format!("{} ({})", v["tag"].as_str().unwrap_or("?"), v["commutant_dim"])
}

/// Markdown summary of the artifacts in `dir` plus a CSV of the wall-crossing samples.
pub fn report(ctx: &Ctx, dir: &Path) -> Result<(), CliError> {
    if !dir.is_dir() {
        return Err(CliError::Validation(format!("artifact directory {} does not exist", dir.display())));
    }
    let mut md = String::from("# su3casson report\n");
    let solve = load(dir, "solve.json")?;
    let coh = load(dir, "cohomology.json")?;
    if let Some(s) = &solve {
        let _ = writeln!(md, "\n## Conjugacy classes\n\nPresentation: `{}`, group `{}`.\n", s["presentation"].as_str().unwrap_or(""), s["group"].as_str().unwrap_or(""));
        md.push_str("| class | stabilizer | members | residual | fingerprint | H0/H1 by module |\n|---|---|---|---|---|---|\n");
        for c in arr(&s["classes"]) {
            let idx = &c["index"];
            let dims = coh
                .as_ref()
                .and_then(|h| arr(&h["classes"]).iter().find(|k| &k["index"] == idx).cloned())
                .map(|k| {
                    arr(&k["modules"])
                        .iter()
                        .map(|m| format!("{}: {}/{}", m["module"].as_str().unwrap_or("?"), m["dim_h0"], m["dim_h1"]))
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .unwrap_or_default();
            let _ = writeln!(
                md,
                "| {} | {} | {} | {:.1e} | {} | {} |",
                idx,
                stabilizer(&c["stabilizer"]),
                c["members"],
                c["residual"].as_f64().unwrap_or(f64::NAN),
                fmt_fingerprint(&c["fingerprint"]),
                dims
            );
        }
    }
    if let Some(d) = load(dir, "detect.json")? {
        md.push_str("\n## Detection\n\n| class | verdict | three-eigenvalue word | branches |\n|---|---|---|---|\n");
        for c in arr(&d["classes"]) {
            let witness = match &c["three_eigenvalue"] {
                Value::Null => "none".to_string(),
                w => format!("{} ({})", w["word"], w["branch"].as_str().unwrap_or("?")),
            };
            let branches: Vec<String> = arr(&c["cocycles"])
                .iter()
                .map(|z| z["detection"]["branch"].as_str().unwrap_or("not found").to_string())
                .collect();
            let _ = writeln!(md, "| {} | {} | {} | {} |", c["index"], c["verdict"].as_str().unwrap_or("?"), witness, branches.join(", "));
        }
    }
    if let Some(s) = load(dir, "span_check.json")? {
        md.push_str("\n## Hessian span\n\n| class | lemma U_ii | lemma U_ij | search mode | rank/target | ok |\n|---|---|---|---|---|---|\n");
        for c in arr(&s["classes"]) {
            let q = &c["search"];
            let _ = writeln!(
                md,
                "| {} | {} | {} | {} | {}/{} | {} |",
                c["index"],
                c["lemma"]["uii_ok"],
                c["lemma"]["uij_ok"],
                q["mode"].as_str().unwrap_or("error"),
                q["rank"],
                q["target_dim"],
                q["ok"]
            );
        }
    }
    if let Some(h) = load(dir, "holcalc_check.json")? {
        let _ = writeln!(
            md,
            "\n## Holonomy calculus\n\n- first derivative, max error: {:.2e}\n- second derivative, max error: {:.2e}\n- closed forms, max error: {:.2e}\n- verdict: {}",
            h["derivatives"]["max_first_error"].as_f64().unwrap_or(f64::NAN),
            h["derivatives"]["max_second_error"].as_f64().unwrap_or(f64::NAN),
            h["closed_forms"]["max_error"].as_f64().unwrap_or(f64::NAN),
            if h["ok"] == Value::Bool(true) { "ok" } else { "FAILED" }
        );
    }
    if let Some(b) = load(dir, "bifurcate.json")? {
        let a = &b["audit"];
        let _ = writeln!(
            md,
            "\n## Wall crossing (`{}`)\n\n| t | lambda' | lambda'' | lambda' - lambda'' |\n|---|---|---|---|",
            b["scenario"].as_str().unwrap_or("")
        );
        let mut csv = String::from("t,lambda_prime,lambda_doubleprime,difference\n");
        for r in arr(&b["samples"]) {
            let _ = writeln!(md, "| {} | {} | {} | {} |", r["t"], r["lambda_prime"], r["lambda_doubleprime"], r["difference"]);
            let _ = writeln!(csv, "{},{},{},{}", r["t"], r["lambda_prime"], r["lambda_doubleprime"], r["difference"]);
        }
        let bs: Vec<String> = arr(&a["arcs"]).iter().map(|x| x["b"].to_string()).collect();
        let _ = writeln!(
            md,
            "\nb(C) per arc: [{}]; verdict: {}",
            bs.join(", "),
            if a["ok"] == Value::Bool(true) { "ok" } else { "FAILED" }
        );
        write_atomic(&ctx.out.join("report.csv"), csv.as_bytes())?;
    }
    write_atomic(&ctx.out.join("report.md"), md.as_bytes())
}
