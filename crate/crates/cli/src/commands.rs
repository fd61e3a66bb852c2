use crate::artifact::{read_json, read_text, write_atomic, write_json};
use crate::config::RunConfig;
use crate::error::{invalid, CliError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use su3casson::bifurcation::{self, counts_csv, sample_counts, wall_crossing_audit, AuditReport, ModelFamily, SignedCount};
use su3casson::detect::{
    find_detecting_loop, hessian_span_search, span_checks, three_eigenvalue_element, CrossedHom, DetectConfig,
    DetectError, Detection, EigenWitness, HessianSpanReport, SpanReport, SpanSearchConfig,
};
use su3casson::foxcoh::{
    cohomology_summary, h1_basis, quaternion_structure_check, CoefficientModule, CohomologySummary, ModuleTag,
    QuaternionReport,
};
use su3casson::holcalc::{closed_form_check, derivative_check, ClosedFormReport, DerivativeCheckConfig, DerivativeReport};
use su3casson::presentation::{parse_presentation, Abelianization, GroupPresentation};
use su3casson::repvariety::{
    classify_stabilizer, solve_representations, GroupKind, Representation, StabilizerClass, StabilizerTag, SolverConfig,
};
use su3casson::su3::{ReductionFrame, UnitaryMatrix3};
use su3casson::C64;

pub struct Ctx {
    pub config: RunConfig,
    pub out: PathBuf,
}

impl Ctx {
    fn artifact(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

/// Text grammar, or the JSON form when the file ends in `.json` (either a
/// bare presentation or a `parse` artifact).
pub fn load_presentation(path: &Path) -> Result<GroupPresentation, CliError> {
    if path.extension().is_some_and(|e| e == "json") {
        let mut v: serde_json::Value = read_json(path)?;
        if let Some(p) = v.get_mut("presentation") {
            v = p.take();
        }
        return serde_json::from_value(v).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())));
    }
    let text = read_text(path)?;
    parse_presentation(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct ParseArtifact<'a> {
    config: &'a RunConfig,
    presentation: GroupPresentation,
    text: String,
    abelianization: Abelianization,
    homology_sphere: bool,
    exponent_sums: Vec<Vec<i64>>,
}

pub fn parse(ctx: &Ctx, input: &Path) -> Result<(), CliError> {
    let p = load_presentation(input)?;
    let art = ParseArtifact {
        config: &ctx.config,
        text: p.to_text(),
        abelianization: p.abelianization(),
        homology_sphere: p.is_homology_sphere(),
        exponent_sums: p.exponent_sum_matrix(),
        presentation: p,
    };
    write_json(&ctx.artifact("parse.json"), &art)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassRecord {
    pub index: usize,
    pub stabilizer: StabilizerClass,
    pub stabilizer_flagged: bool,
    pub members: usize,
    pub residual: f64,
    pub fingerprint: Vec<C64>,
    pub representative: Representation,
}

#[derive(Serialize)]
struct SolveArtifact<'a> {
    config: &'a RunConfig,
    group: GroupKind,
    presentation: String,
    converged: usize,
    dropped: usize,
    classes: Vec<ClassRecord>,
}

pub fn solve(ctx: &Ctx, input: &Path, group: GroupKind) -> Result<(), CliError> {
    let p = load_presentation(input)?;
    let c = &ctx.config;
    let cfg = SolverConfig {
        seed: c.seed,
        starts: c.bound("starts"),
        max_iter: c.bound("max_iter"),
        tol_residual: c.tol("residual"),
        ..Default::default()
    };
    let outcome = solve_representations(&p, group, &cfg);
    let classes = outcome
        .classes(c.tol("dedup"), c.bound("fingerprint_len"))
        .into_iter()
        .enumerate()
        .map(|(index, k)| {
            let info = classify_stabilizer(&k.representative, c.tol("residual")).map_err(invalid)?;
            Ok(ClassRecord {
                index,
                stabilizer: info.class,
                stabilizer_flagged: info.flagged,
                members: k.members,
                residual: k.representative.residual(),
                fingerprint: k.fingerprint,
                representative: k.representative,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let art = SolveArtifact {
        config: c,
        group,
        presentation: p.to_text(),
        converged: outcome.representations.len(),
        dropped: outcome.dropped,
        classes,
    };
    write_json(&ctx.artifact("solve.json"), &art)
}

#[derive(Deserialize)]
struct SolveInput {
    classes: Vec<ClassRecord>,
}

fn load_classes(path: &Path, only: Option<usize>) -> Result<Vec<ClassRecord>, CliError> {
    let s: SolveInput = read_json(path)?;
    match only {
        None => Ok(s.classes),
        Some(i) => {
            let c = s.classes.into_iter().find(|c| c.index == i);
            c.map(|c| vec![c]).ok_or_else(|| CliError::Validation(format!("no class {i} in {}", path.display())))
        }
    }
}

fn reduction_frame(ctx: &Ctx, rho: &Representation) -> Result<Option<ReductionFrame>, CliError> {
    let info = classify_stabilizer(rho, ctx.config.tol("residual").max(rho.residual())).map_err(invalid)?;
    Ok(if info.class.tag == StabilizerTag::ReducibleU1 { info.frame } else { None })
}

#[derive(Serialize)]
struct ClassCohomology {
    index: usize,
    stabilizer: StabilizerClass,
    modules: Vec<CohomologySummary>,
    quaternion: Option<QuaternionReport>,
    quaternion_error: Option<String>,
}

#[derive(Serialize)]
struct CohomologyArtifact<'a> {
    config: &'a RunConfig,
    classes: Vec<ClassCohomology>,
}

pub fn cohomology(ctx: &Ctx, solve_path: &Path, only: Option<usize>) -> Result<(), CliError> {
    let c = &ctx.config;
    let tol = c.tol("rank");
    let mut out = Vec::new();
    for rec in load_classes(solve_path, only)? {
        let rho = &rec.representative;
        let frame = reduction_frame(ctx, rho)?;
        let mut modules = vec![CoefficientModule::su3()];
        if rho.group() == GroupKind::Su2InSu3 {
            modules.push(CoefficientModule::new(ModuleTag::Su2Adjoint, None).map_err(invalid)?);
        }
        if let Some(f) = &frame {
            for tag in [ModuleTag::HPart, ModuleTag::HperpPart] {
                modules.push(CoefficientModule::new(tag, Some(f.clone())).map_err(invalid)?);
            }
        }
        let summaries =
            modules.iter().map(|m| cohomology_summary(rho, m, tol)).collect::<Result<Vec<_>, _>>().map_err(invalid)?;
        let (quaternion, quaternion_error) = if frame.is_some() {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            rng.set_stream(rec.index as u64);
            match quaternion_structure_check(rho, c.bound("quaternion_trials"), tol, &mut rng) {
                Ok(q) => (Some(q), None),
                Err(e) => (None, Some(e.to_string())),
            }
        } else {
            (None, None)
        };
        out.push(ClassCohomology { index: rec.index, stabilizer: rec.stabilizer, modules: summaries, quaternion, quaternion_error });
    }
    write_json(&ctx.artifact("cohomology.json"), &CohomologyArtifact { config: c, classes: out })?;
    Ok(())
}

#[derive(Serialize)]
struct CocycleDetection {
    basis_index: usize,
    detection: Option<Detection>,
    error: Option<String>,
}

#[derive(Serialize)]
struct ClassDetect {
    index: usize,
    stabilizer: StabilizerClass,
    three_eigenvalue: Option<EigenWitness>,
    three_eigenvalue_error: Option<String>,
    dim_h1_su3: usize,
    cocycles: Vec<CocycleDetection>,
    verdict: &'static str,
}

#[derive(Serialize)]
struct DetectArtifact<'a> {
    config: &'a RunConfig,
    classes: Vec<ClassDetect>,
}

pub fn detect(ctx: &Ctx, solve_path: &Path, only: Option<usize>) -> Result<(), CliError> {
    let c = &ctx.config;
    let cfg = DetectConfig {
        short_word_len: c.bound("short_word_len"),
        family_k: c.bound("family_k"),
        family_base_len: c.bound("family_base_len"),
        tol: c.tol("detect"),
    };
    let module = CoefficientModule::su3();
    let mut out = Vec::new();
    let mut missing = 0;
    for rec in load_classes(solve_path, only)? {
        let rho = &rec.representative;
        let (three_eigenvalue, three_eigenvalue_error) = match three_eigenvalue_element(rho, c.bound("eigen_max_len")) {
            Ok(w) => (Some(w), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let basis = h1_basis(rho, &module, c.tol("rank")).map_err(invalid)?;
        let skip = matches!(rec.stabilizer.tag, StabilizerTag::Central | StabilizerTag::AbelianLarge);
        let cocycles: Vec<CocycleDetection> = if skip {
            Vec::new()
        } else {
            basis
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let z = CrossedHom::from_cocycle(z, &module);
                    match find_detecting_loop(rho, &z, &cfg) {
                        Ok(d) => CocycleDetection { basis_index: i, detection: Some(d), error: None },
                        Err(e) => CocycleDetection { basis_index: i, detection: None, error: Some(e.to_string()) },
                    }
                })
                .collect()
        };
        let verdict = if skip {
            "skipped"
        } else if cocycles.is_empty() {
            "vacuous"
        } else if cocycles.iter().all(|d| d.detection.is_some()) {
            "detected"
        } else {
            missing += 1;
            "not_found"
        };
        out.push(ClassDetect {
            index: rec.index,
            stabilizer: rec.stabilizer,
            three_eigenvalue,
            three_eigenvalue_error,
            dim_h1_su3: basis.len(),
            cocycles,
            verdict,
        });
    }
    write_json(&ctx.artifact("detect.json"), &DetectArtifact { config: c, classes: out })?;
    if missing > 0 {
        return Err(CliError::NotFound(format!("{missing} class(es) with undetected cocycles; see detect.json")));
    }
    Ok(())
}

/// SU(2) part of `m` in the frame, rescaled to determinant one.
fn su2_part(frame: &ReductionFrame, m: &UnitaryMatrix3) -> nalgebra::Matrix2<C64> {
    let b = UnitaryMatrix3::new_unchecked(frame.to_frame(m.matrix())).upper_block();
    b / b.determinant().sqrt()
}

#[derive(Serialize)]
struct ClassSpan {
    index: usize,
    lemma: Option<SpanReport>,
    search: Option<HessianSpanReport>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SpanArtifact<'a> {
    config: &'a RunConfig,
    classes: Vec<ClassSpan>,
}

pub fn span_check(ctx: &Ctx, solve_path: &Path, only: Option<usize>) -> Result<(), CliError> {
    let c = &ctx.config;
    let cfg = SpanSearchConfig { max_len: c.bound("span_max_len"), max_power: c.bound("span_max_power") as i32, tol: c.tol("span") };
    let mut out = Vec::new();
    let mut missing = 0;
    for rec in load_classes(solve_path, only)? {
        let rho = &rec.representative;
        let Some(frame) = reduction_frame(ctx, rho)? else { continue };
        let lemma = (rho.images().len() >= 2)
            .then(|| span_checks(&su2_part(&frame, &rho.images()[0]), &su2_part(&frame, &rho.images()[1]), c.tol("span")));
        let (search, error) = match hessian_span_search(rho, &cfg) {
            Ok(r) => (Some(r), None),
            Err(e) => {
                if matches!(e, DetectError::KernelWordsNotFound { .. }) {
                    missing += 1;
                }
                (None, Some(e.to_string()))
            }
        };
        out.push(ClassSpan { index: rec.index, lemma, search, error });
    }
    write_json(&ctx.artifact("span_check.json"), &SpanArtifact { config: c, classes: out })?;
    if missing > 0 {
        return Err(CliError::NotFound(format!("kernel words not found for {missing} class(es); see span_check.json")));
    }
    Ok(())
}

#[derive(Serialize)]
struct HolcalcArtifact<'a> {
    config: &'a RunConfig,
    derivatives: DerivativeReport,
    closed_forms: ClosedFormReport,
    ok: bool,
}

pub fn holcalc_check(ctx: &Ctx) -> Result<(), CliError> {
    let c = &ctx.config;
    let cfg = DerivativeCheckConfig {
        seed: c.seed,
        trials: c.bound("holcalc_trials"),
        n: c.bound("holcalc_n"),
        tol_first: c.tol("holcalc_first"),
        tol_second: c.tol("holcalc_second"),
        ..Default::default()
    };
    let derivatives = derivative_check(&cfg).map_err(invalid)?;
    let closed_forms =
        closed_form_check(c.seed, c.bound("closed_form_per_case"), c.bound("closed_form_n"), c.tol("closed_form"))
            .map_err(invalid)?;
    let ok = derivatives.ok && closed_forms.ok;
    let summary = format!(
        "first-order error {:.2e}, second-order error {:.2e}, closed-form error {:.2e}",
        derivatives.max_first_error, derivatives.max_second_error, closed_forms.max_error
    );
    write_json(&ctx.artifact("holcalc_check.json"), &HolcalcArtifact { config: c, derivatives, closed_forms, ok })?;
    if !ok {
        return Err(CliError::Audit(summary));
    }
    Ok(())
}

#[derive(Serialize)]
struct BifurcateArtifact<'a> {
    config: &'a RunConfig,
    scenario: String,
    family: ModelFamily,
    audit: AuditReport,
    samples: Vec<SignedCount>,
}

/// `pitchfork`, `figure1`, or a JSON scenario file.
pub fn load_scenario(name: &str) -> Result<ModelFamily, CliError> {
    match name {
        "pitchfork" => Ok(bifurcation::pitchfork()),
        "figure1" => Ok(bifurcation::figure_one()),
        path => ModelFamily::from_json(&read_text(Path::new(path))?).map_err(|e| CliError::Validation(format!("{path}: {e}"))),
    }
}

pub fn bifurcate(ctx: &Ctx, scenario: &str) -> Result<(), CliError> {
    let family = load_scenario(scenario)?;
    let audit = wall_crossing_audit(&family).map_err(invalid)?;
    let samples = sample_counts(&family).map_err(invalid)?;
    write_atomic(&ctx.artifact("bifurcate.csv"), counts_csv(&samples).as_bytes())?;
    let ok = audit.ok;
    let failures = audit.failures.join("; ");
    write_json(
        &ctx.artifact("bifurcate.json"),
        &BifurcateArtifact { config: &ctx.config, scenario: scenario.to_string(), family, audit, samples },
    )?;
    if !ok {
        return Err(CliError::Audit(failures));
    }
    Ok(())
}
