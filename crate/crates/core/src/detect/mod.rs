//! Detecting loops for cocycles, three-eigenvalue elements and the
//! Hessian span calculus at reducible representations.

mod eigen;
mod search;
mod span;

pub use eigen::{three_eigenvalue_element, EigenBranch, EigenWitness};
pub use search::{find_detecting_loop, DetectBranch, DetectConfig, Detection};
pub use span::{
    hessian_span_search, hessian_span_synthetic, psi_phi_matrices, span_checks, BlockRank, HessianSpanReport, PsiPhi,
    SpanMode, SpanReport, SpanSearchConfig,
};

use crate::foxcoh::{Cocycle, CoefficientModule, CohomologyError};
use crate::presentation::Word;
use crate::repvariety::{RepError, Representation};
use crate::su3::{LieAlg3, UnitaryMatrix3};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Relative tolerance for `z(r) = 0` on relators.
pub const COCYCLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DetectError {
    #[error("expected {expected} cocycle values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("cochain is not a cocycle: |z(r)| = {residual:.3e}")]
    InconsistentCocycle { residual: f64 },
    #[error("no detecting word among {tested} candidates (max |derivative| {max_derivative:.3e})")]
    NotFound { tested: usize, max_derivative: f64 },
    #[error("no element with three distinct eigenvalues among {tested} candidates")]
    NoThreeEigenvalueElement { tested: usize },
    #[error("representation is not reducible with U(1) stabilizer")]
    NotReducibleU1,
    #[error("kernel words pairing with H^1 not found: rank {rank} of {needed} from {candidates} kernel words")]
    KernelWordsNotFound { rank: usize, needed: usize, candidates: usize },
    #[error("no pair of words with noncommuting SU(2) blocks")]
    CommutingImages,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// A 1-cochain with su(3) values, one per generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossedHom {
    pub values: Vec<LieAlg3>,
}

impl CrossedHom {
    pub fn new(values: Vec<LieAlg3>) -> Self {
        Self { values }
    }

    pub fn zero(n: usize) -> Self {
        Self { values: vec![LieAlg3::zero(); n] }
    }

    pub fn from_cocycle(c: &Cocycle, module: &CoefficientModule) -> Self {
        Self { values: c.to_lie(module) }
    }

    /// The coboundary `z_i = v - Ad_{rho(x_i)} v`.
    pub fn coboundary(images: &[UnitaryMatrix3], v: &LieAlg3) -> Self {
        Self { values: images.iter().map(|g| *v - v.ad(g)).collect() }
    }

    pub fn scale(&self) -> f64 {
        self.values.iter().map(LieAlg3::norm).fold(0.0, f64::max)
    }

    /// Largest `|z(r)|` over the relators.
    pub fn relator_residual(&self, rho: &Representation) -> f64 {
        rho.presentation()
            .relators()
            .iter()
            .map(|r| crossed_extend(rho.images(), self, r).norm())
            .fold(0.0, f64::max)
    }

    pub fn check(&self, rho: &Representation) -> Result<(), DetectError> {
        let n = rho.presentation().num_generators();
        if self.values.len() != n {
            return Err(DetectError::WrongLength { expected: n, got: self.values.len() });
        }
        let residual = self.relator_residual(rho);
        if residual > COCYCLE_TOL * self.scale().max(1.0) {
            return Err(DetectError::InconsistentCocycle { residual });
        }
        Ok(())
    }
}

/// Value of `z` on `w` from `z(uv) = z(u) + Ad_{rho(u)} z(v)` and
/// `z(x^-1) = -Ad_{rho(x)^-1} z(x)`.
pub fn crossed_extend(images: &[UnitaryMatrix3], z: &CrossedHom, w: &Word) -> LieAlg3 {
    crossed_extend_with_holonomy(images, z, w).0
}

/// `z(w)` together with `rho(w)`.
pub fn crossed_extend_with_holonomy(images: &[UnitaryMatrix3], z: &CrossedHom, w: &Word) -> (LieAlg3, UnitaryMatrix3) {
    let mut acc = LieAlg3::zero();
    let mut g = UnitaryMatrix3::identity();
    for l in w.letters() {
        let x = &images[l.generator];
        let zl = if l.exponent > 0 { z.values[l.generator] } else { -z.values[l.generator].ad(&x.inverse()) };
        acc = acc + zl.ad(&g);
        g = if l.exponent > 0 { g * *x } else { g * x.inverse() };
    }
    (acc, g)
}

/// `d/dt tr rho_t(w)` at `t = 0` along `rho_t(x_i) = exp(t z_i) rho(x_i)`.
pub fn trace_derivative(images: &[UnitaryMatrix3], z: &CrossedHom, w: &Word) -> C64 {
    let (zw, g) = crossed_extend_with_holonomy(images, z, w);
    (zw.matrix() * g.matrix()).trace()
}
