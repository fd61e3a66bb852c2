//! U(1)-equivariant wall-crossing model: reducible arcs carrying
//! multiplicity-two `h_perp` eigenvalues, irreducible critical circles of
//! the quartic model, spectral flow and the invariance audit.

mod model;
mod scenarios;
mod sf;

pub use model::{orbit_flow, BifurcationPoint, Mode, ReducibleArc};
pub use scenarios::{figure_one, pitchfork, random_family};
pub use sf::{spectral_flow, spectral_flow_fn, EigenBranch, EigenPath};

use serde::{Deserialize, Serialize};

/// Regular-value tolerance in `t`.
pub const T_TOL: f64 = 1e-9;
/// Offset from a bifurcation point used to sample the adjacent irreducible branch.
const SIDE_EPS: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BifError {
    #[error("invalid model: {0}")]
    Validation(String),
    #[error("t = {t} is not a regular value: {detail}")]
    NonRegular { t: f64, detail: String },
    #[error("tangential zero of mode {mode} at s = {s}")]
    Tangential { mode: usize, s: f64 },
    #[error("non-transverse crossing near s = {s}")]
    NonTransverse { s: f64 },
    #[error("delta = {delta} must lie in (0, {floor})")]
    BadDelta { delta: f64, floor: f64 },
    #[error("non-generic model: {0}")]
    NonGeneric(String),
}

/// A parameterized moduli space made of reducible arcs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFamily {
    pub arcs: Vec<ReducibleArc>,
    pub delta: f64,
}

impl ModelFamily {
    pub fn new(arcs: Vec<ReducibleArc>, delta: f64) -> Result<Self, BifError> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(BifError::Validation(format!("delta must be positive, got {delta}")));
        }
        Ok(Self { arcs, delta })
    }

    pub fn from_json(text: &str) -> Result<Self, BifError> {
        let f: ModelFamily = serde_json::from_str(text).map_err(|e| BifError::Validation(e.to_string()))?;
        Self::new(f.arcs, f.delta)
    }

    /// Values of `t` where the slice changes: bifurcation points and folds.
    pub fn critical_values(&self) -> Result<Vec<f64>, BifError> {
        let mut out = Vec::new();
        for arc in &self.arcs {
            out.extend(arc.bifurcation_points()?.iter().map(|p| p.t));
            out.extend(arc.fold_indices().iter().map(|&j| arc.t_knots[j]));
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        Ok(out)
    }

    pub fn check_regular(&self, t: f64) -> Result<(), BifError> {
        if let Some(c) = self.critical_values()?.into_iter().find(|c| (c - t).abs() < T_TOL) {
            return Err(BifError::NonRegular { t, detail: format!("critical value {c}") });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducibleOrbit {
    pub arc: usize,
    pub s: f64,
    /// `(-1)^{Sf(theta, A)}`.
    pub parity: i64,
    /// Hessian eigenvalues `2 a_k`, each of real multiplicity two.
    pub hperp_eigenvalues: Vec<f64>,
    pub sf_hperp: i64,
    pub cs_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrreducibleOrbit {
    pub arc: usize,
    pub mode: usize,
    pub s: f64,
    pub radius_sq: f64,
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuliSlice {
    pub t: f64,
    pub reducibles: Vec<ReducibleOrbit>,
    pub irreducibles: Vec<IrreducibleOrbit>,
}

/// Sign of the critical circle of mode `k` at `s`: parity of the reducible
/// composed with the model flow out to the circle.
fn irreducible_sign(arc: &ReducibleArc, k: usize, s: f64) -> Result<i64, BifError> {
    let a = arc.a_mode(k, s).0;
    let flow = orbit_flow(a, arc.modes[k].b)?;
    Ok(arc.parity(s) * if flow.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Reducible and irreducible orbits over a regular value `t`.
pub fn moduli_slice(fam: &ModelFamily, t: f64) -> Result<ModuliSlice, BifError> {
    fam.check_regular(t)?;
    let mut reducibles = Vec::new();
    let mut irreducibles = Vec::new();
    for (i, arc) in fam.arcs.iter().enumerate() {
        for s in arc.preimages(t) {
            reducibles.push(ReducibleOrbit {
                arc: i,
                s,
                parity: arc.parity(s),
                hperp_eigenvalues: arc.hperp_eigenvalues(s).iter().map(|e| e.0).collect(),
                sf_hperp: arc.sf_hperp(s, fam.delta)?,
                cs_value: arc.cs_value,
            });
            for (k, m) in arc.modes.iter().enumerate() {
                let a = arc.a(m, s).0;
                if a * m.b < 0.0 {
                    irreducibles.push(IrreducibleOrbit {
                        arc: i,
                        mode: k,
                        s,
                        radius_sq: -a / (2.0 * m.b),
                        sign: irreducible_sign(arc, k, s)?,
                    });
                }
            }
        }
    }
    Ok(ModuliSlice { t, reducibles, irreducibles })
}

/// Signed counts at one value of `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignedCount {
    pub t: f64,
    pub lambda_prime: i64,
    pub lambda_doubleprime: f64,
    /// `lambda' - lambda''`.
    pub difference: f64,
}

impl SignedCount {
    pub fn from_slice(slice: &ModuliSlice) -> Self {
        let lp: i64 = slice.irreducibles.iter().map(|o| o.sign).sum();
        let lpp: f64 = slice
            .reducibles
            .iter()
            .map(|r| 0.5 * r.parity as f64 * (r.sf_hperp as f64 - 4.0 * r.cs_value + 2.0))
            .sum();
        Self { t: slice.t, lambda_prime: lp, lambda_doubleprime: lpp, difference: lp as f64 - lpp }
    }
}

pub fn signed_count(fam: &ModelFamily, t: f64) -> Result<SignedCount, BifError> {
    moduli_slice(fam, t).map(|s| SignedCount::from_slice(&s))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcAudit {
    pub arc: usize,
    pub closed: bool,
    pub orientation: i64,
    pub bifurcations: Vec<BifurcationPoint>,
    /// `h_perp` spectral flow along the arc in the direction of increasing `s`.
    pub sf_hperp: i64,
    /// Half the oriented `h_perp` spectral flow.
    pub b: i64,
    /// Oriented sum of the signs of `a'` at the bifurcation points.
    pub b_from_points: i64,
    /// Bifurcation points counted with their boundary orientation in the
    /// closure of the irreducible stratum.
    pub beta: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub minus: SignedCount,
    pub plus: SignedCount,
    pub arcs: Vec<ArcAudit>,
    pub bifurcation_total: i64,
    pub beta_total: i64,
    pub lambda_prime_jump_ok: bool,
    pub arcs_ok: bool,
    pub invariance_ok: bool,
    pub ok: bool,
    pub failures: Vec<String>,
}

fn boundary_orientation(arc: &ReducibleArc, p: &BifurcationPoint) -> Result<i64, BifError> {
    let wrap = |s: f64| if arc.closed { s.rem_euclid(1.0) } else { s.clamp(0.0, 1.0) };
    let (lo, hi) = (wrap(p.s - SIDE_EPS), wrap(p.s + SIDE_EPS));
    let b = arc.modes[p.mode].b;
    let below = arc.a_mode(p.mode, lo).0 * b < 0.0;
    let side = if below { lo } else { hi };
    let o_irr = irreducible_sign(arc, p.mode, side)? * arc.t_direction(side) as i64;
    Ok(if below { o_irr } else { -o_irr })
}

fn audit_arc(i: usize, arc: &ReducibleArc, delta: f64) -> Result<ArcAudit, BifError> {
    let orientation = arc.orientation();
    let bifurcations = arc.bifurcation_points()?;
    let sf = arc.hperp_flow(0.0, 1.0, delta)?;
    let b_from_points = orientation * bifurcations.iter().map(|p| p.sign).sum::<i64>();
    let beta = bifurcations.iter().map(|p| boundary_orientation(arc, p)).sum::<Result<i64, _>>()?;
    let b = orientation * sf / 2;
    let ok = sf % 2 == 0 && b == b_from_points && beta == -b && (!arc.closed || b == 0);
    Ok(ArcAudit { arc: i, closed: arc.closed, orientation, bifurcations, sf_hperp: sf, b, b_from_points, beta, ok })
}

/// Counts at `t = -1, +1` and the consistency checks between them.
pub fn wall_crossing_audit(fam: &ModelFamily) -> Result<AuditReport, BifError> {
    let minus = signed_count(fam, -1.0)?;
    let plus = signed_count(fam, 1.0)?;
    let arcs: Vec<ArcAudit> =
        fam.arcs.iter().enumerate().map(|(i, a)| audit_arc(i, a, fam.delta)).collect::<Result<_, _>>()?;
    let bifurcation_total: i64 = arcs.iter().map(|a| a.b).sum();
    let beta_total: i64 = arcs.iter().map(|a| a.beta).sum();
    let mut failures = Vec::new();
    let lambda_prime_jump_ok = plus.lambda_prime - minus.lambda_prime == -beta_total;
    if !lambda_prime_jump_ok {
        failures.push(format!(
            "lambda' jump {} != -sum beta = {}",
            plus.lambda_prime - minus.lambda_prime,
            -beta_total
        ));
    }
    for a in arcs.iter().filter(|a| !a.ok) {
        failures.push(format!(
            "arc {}: sf {} b {} from points {} beta {} closed {}",
            a.arc, a.sf_hperp, a.b, a.b_from_points, a.beta, a.closed
        ));
    }
    let arcs_ok = arcs.iter().all(|a| a.ok);
    let invariance_ok = (plus.difference - minus.difference).abs() < 1e-9;
    if !invariance_ok {
        failures.push(format!("lambda' - lambda'' changes from {} to {}", minus.difference, plus.difference));
    }
    Ok(AuditReport {
        ok: failures.is_empty(),
        minus,
        plus,
        arcs,
        bifurcation_total,
        beta_total,
        lambda_prime_jump_ok,
        arcs_ok,
        invariance_ok,
        failures,
    })
}

/// Signed counts at `t = -1`, at midpoints between consecutive critical
/// values, and at `t = +1`.
pub fn sample_counts(fam: &ModelFamily) -> Result<Vec<SignedCount>, BifError> {
    let mut ts = vec![-1.0];
    let crit: Vec<f64> = fam.critical_values()?.into_iter().filter(|c| c.abs() < 1.0).collect();
    let mut knots = vec![-1.0];
    knots.extend(crit);
    knots.push(1.0);
    ts.extend(knots.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    ts.push(1.0);
    ts.iter().map(|&t| signed_count(fam, t)).collect()
}

pub fn counts_csv(rows: &[SignedCount]) -> String {
    let mut out = String::from("t,lambda_prime,lambda_doubleprime,difference\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.t, r.lambda_prime, r.lambda_doubleprime, r.difference));
    }
    out
}
