use super::{holonomy_derivatives, HolError, LoopConnection};
use crate::su3::{CMat3, HperpVector, LieAlg3, UnitaryMatrix3};
use crate::C64;
use serde::{Deserialize, Serialize};

/// The five trace expressions for Hessians of holonomy functions on
/// `h_perp` directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HessianCase {
    /// One loop with trivial holonomy: `2 tr(xi zeta)`.
    GammaGamma,
    /// A loop with holonomy `L` followed by a trivial one: `tr(L (xi zeta + zeta xi))`.
    LoopGamma,
    /// Two trivial loops: `tr((xi_i + xi_j)(zeta_i + zeta_j))`.
    GammaIGammaJ,
    /// `gamma_i, l^-1, gamma_j, l`: `tr((xi_i + L xi_j L^-1)(zeta_i + L zeta_j L^-1))`.
    Conj,
    /// `l, gamma_j, gamma_i`: `tr(L (xi_i + xi_j)(zeta_i + zeta_j))`, valid for
    /// `xi_j = zeta_i = 0`.
    LoopGammaIGammaJ,
}

impl HessianCase {
    pub const ALL: [HessianCase; 5] = [
        HessianCase::GammaGamma,
        HessianCase::LoopGamma,
        HessianCase::GammaIGammaJ,
        HessianCase::Conj,
        HessianCase::LoopGammaIGammaJ,
    ];

    /// Ratio of the closed form to the mixed partial `d^2/ds dt tr hol`.
    pub fn normalization(self) -> f64 {
        match self {
            HessianCase::GammaGamma | HessianCase::LoopGamma => 2.0,
            _ => 1.0,
        }
    }
}

fn check_block(l: &UnitaryMatrix3) -> Result<(), HolError> {
    let m = l.matrix();
    let defect = [m[(0, 2)], m[(1, 2)], m[(2, 0)], m[(2, 1)], m[(2, 2)] - C64::new(1.0, 0.0)]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if defect > 1e-10 {
        return Err(HolError::NotBlockForm(format!("defect {defect:.3e}")));
    }
    Ok(())
}

/// Evaluate the closed-form trace expression of `case`.
///
/// Cases without `L` ignore it; cases without a second loop ignore `j` data.
pub fn hessian_closed_form(
    case: HessianCase,
    l: &UnitaryMatrix3,
    xi_i: &HperpVector,
    zeta_i: &HperpVector,
    xi_j: &HperpVector,
    zeta_j: &HperpVector,
) -> Result<C64, HolError> {
    check_block(l)?;
    let (xi, zi, xj, zj) = (xi_i.to_matrix(), zeta_i.to_matrix(), xi_j.to_matrix(), zeta_j.to_matrix());
    let lm = l.matrix();
    let two = C64::new(2.0, 0.0);
    Ok(match case {
        HessianCase::GammaGamma => (xi * zi).trace() * two,
        HessianCase::LoopGamma => (lm * (xi * zi + zi * xi)).trace(),
        HessianCase::GammaIGammaJ => ((xi + xj) * (zi + zj)).trace(),
        HessianCase::Conj => ((xi + l.conjugate(&xj)) * (zi + l.conjugate(&zj))).trace(),
        HessianCase::LoopGammaIGammaJ => (lm * (xi + xj) * (zi + zj)).trace(),
    })
}

/// One piece of a synthesized loop, traversed in `1/K` of the parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    /// Trivial transport; the tangents integrate to `xi` and `zeta` in the
    /// trivialization at the start of the segment.
    Gamma { xi: LieAlg3, zeta: LieAlg3 },
    /// Transport `exp(-x)` and zero tangents.
    Holonomy { x: LieAlg3 },
}

/// A base connection and two tangents on a common grid.
#[derive(Clone, Debug)]
pub struct SynthesizedLoop {
    pub base: LoopConnection,
    pub a: LoopConnection,
    pub b: LoopConnection,
}

// Unit-mass bump 630 s^4 (1-s)^4; g = (s (1-s))^4 vanishes at both ends, so g' has zero mean.
fn bump(s: f64) -> f64 {
    630.0 * (s * (1.0 - s)).powi(4)
}

fn profile(s: f64) -> f64 {
    (s * (1.0 - s)).powi(4)
}

fn profile_deriv(s: f64) -> f64 {
    4.0 * (s * (1.0 - s)).powi(3) * (1.0 - 2.0 * s)
}

fn expm(x: &CMat3) -> CMat3 {
    *LieAlg3::new_unchecked(*x).exp().matrix()
}

/// Build the base connection and tangents for a sequence of segments.
///
/// Trivial segments carry the base connection `c g'(s) x0` (zero net
/// transport) so that transport inside the segment is nontrivial.
pub fn synthesize(segments: &[Segment], x0: &LieAlg3, n_per_segment: usize) -> Result<SynthesizedLoop, HolError> {
    let k = segments.len();
    let n = k * n_per_segment;
    let kf = k as f64;
    let mut start = vec![CMat3::identity(); k];
    for m in 1..k {
        let t = match &segments[m - 1] {
            Segment::Gamma { .. } => CMat3::identity(),
            Segment::Holonomy { x } => expm(&(-x.matrix())),
        };
        start[m] = t * start[m - 1];
    }
    let mut base = Vec::with_capacity(n + 1);
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    let kc = C64::new(kf, 0.0);
    for i in 0..=n {
        let u = i as f64 / n as f64;
        let m = ((u * kf).floor() as usize).min(k - 1);
        let s = u * kf - m as f64;
        match &segments[m] {
            Segment::Gamma { xi, zeta } => {
                base.push(LieAlg3::new_unchecked(x0.matrix() * (kc * profile_deriv(s))));
                // Local transport exp(-g(s) x0); the tangent is Ad of it applied to the
                // prescribed direction so that P^-1 a P = K bump(s) Ad_{start^-1} xi.
                let q = expm(&(-(x0.matrix() * C64::new(profile(s), 0.0))));
                let w = kc * bump(s);
                a.push(LieAlg3::new_unchecked(q * xi.matrix() * q.adjoint() * w));
                b.push(LieAlg3::new_unchecked(q * zeta.matrix() * q.adjoint() * w));
            }
            Segment::Holonomy { x } => {
                base.push(LieAlg3::new_unchecked(x.matrix() * (kc * bump(s))));
                a.push(LieAlg3::zero());
                b.push(LieAlg3::zero());
            }
        }
    }
    Ok(SynthesizedLoop { base: LoopConnection::new(base)?, a: LoopConnection::new(a)?, b: LoopConnection::new(b)? })
}

/// Comparison of a closed form with the numerically integrated Hessian.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseCheck {
    pub case: HessianCase,
    pub closed_form: C64,
    pub numeric: C64,
    pub error: f64,
}

/// Synthesize loops for `case` and compare the closed form with
/// `normalization * d^2/ds dt tr hol(A + s a + t b)`.
///
/// `x` generates `L = exp(-x)` and must lie in the su(2) block.
#[allow(clippy::too_many_arguments)]
pub fn verify_closed_form(
    case: HessianCase,
    x: &LieAlg3,
    x0: &LieAlg3,
    xi_i: &HperpVector,
    zeta_i: &HperpVector,
    xi_j: &HperpVector,
    zeta_j: &HperpVector,
    n_per_segment: usize,
) -> Result<CaseCheck, HolError> {
    let l = x.exp().inverse();
    let closed_form = hessian_closed_form(case, &l, xi_i, zeta_i, xi_j, zeta_j)?;
    let lie = |p: &HperpVector| LieAlg3::new_unchecked(p.to_matrix());
    let gi = Segment::Gamma { xi: lie(xi_i), zeta: lie(zeta_i) };
    let gj = Segment::Gamma { xi: lie(xi_j), zeta: lie(zeta_j) };
    let ell = Segment::Holonomy { x: *x };
    let ell_inv = Segment::Holonomy { x: -*x };
    let segments = match case {
        HessianCase::GammaGamma => vec![gi],
        HessianCase::LoopGamma => vec![ell, gi],
        HessianCase::GammaIGammaJ => vec![gi, gj],
        HessianCase::Conj => vec![gi, ell_inv, gj, ell],
        HessianCase::LoopGammaIGammaJ => vec![ell, gj, gi],
    };
    let n_seg = n_per_segment.max(16);
    let syn = synthesize(&segments, x0, n_seg)?;
    let d = holonomy_derivatives(&syn.base, &syn.a, &syn.b)?;
    let numeric = d.second_tr * case.normalization();
    Ok(CaseCheck { case, closed_form, numeric, error: (numeric - closed_form).norm() })
}
