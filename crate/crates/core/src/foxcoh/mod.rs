//! Twisted group cohomology `H^0`, `H^1` from Fox calculus.

mod module;
mod quaternion;

pub use module::{CoefficientModule, ModuleTag};
pub use quaternion::{quaternion_structure_check, right_mul, Quaternion, QuaternionReport};

use crate::linalg::{null_space, rank, vstack, RankInfo};
use crate::presentation::GroupRingElement;
use crate::repvariety::Representation;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative rank tolerance.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Largest relator residual accepted when building cochain matrices.
pub const MAX_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CohomologyError {
    #[error("module incompatible with representation: {0}")]
    ModuleIncompatible(String),
    #[error("relator residual {0:.3e} too large for cohomology")]
    ResidualTooLarge(f64),
    #[error("stabilizer class mismatch: {0}")]
    ClassMismatch(String),
}

/// `sum c_k rho(w_k)` acting on the module, as a real matrix.
pub fn evaluate_group_ring(
    e: &GroupRingElement,
    rho: &Representation,
    module: &CoefficientModule,
) -> Result<DMatrix<f64>, CohomologyError> {
    module.check_compatible(rho)?;
    Ok(e.evaluate(module.dim(), |w| module.action(&rho.word_holonomy(w))))
}

/// Fox cocycle matrix (`m d x n d`) and coboundary matrix (`n d x d`).
#[derive(Clone, Debug)]
pub struct CochainMatrices {
    pub cocycle: DMatrix<f64>,
    pub coboundary: DMatrix<f64>,
    pub module_dim: usize,
}

/// Build the Fox cocycle matrix and the coboundary matrix `v -> (v - rho(x_j) v)_j`.
pub fn cochain_matrices(rho: &Representation, module: &CoefficientModule) -> Result<CochainMatrices, CohomologyError> {
    if rho.residual() > MAX_RESIDUAL {
        return Err(CohomologyError::ResidualTooLarge(rho.residual()));
    }
    module.check_compatible(rho)?;
    let p = rho.presentation();
    let (n, m, d) = (p.num_generators(), p.num_relators(), module.dim());
    let fox = p.fox_matrix();
    let mut cocycle = DMatrix::zeros(m * d, n * d);
    for (i, row) in fox.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let block = e.evaluate(d, |w| module.action(&rho.word_holonomy(w)));
            cocycle.view_mut((i * d, j * d), (d, d)).copy_from(&block);
        }
    }
    let blocks: Vec<DMatrix<f64>> =
        rho.images().iter().map(|g| DMatrix::identity(d, d) - module.action(g)).collect();
    let coboundary = vstack(&blocks, d);
    Ok(CochainMatrices { cocycle, coboundary, module_dim: d })
}

/// Dimensions of `Z^1`, `B^1`, `H^1`, `H^0` with rank diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologySummary {
    pub module: ModuleTag,
    pub module_dim: usize,
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    pub dim_h0: usize,
    pub cocycle_singular_values: Vec<f64>,
    pub coboundary_singular_values: Vec<f64>,
    pub rank_tol: f64,
    /// Set when a singular value lies within a factor 10 of the rank threshold.
    pub flagged: bool,
}

pub fn cohomology_summary(
    rho: &Representation,
    module: &CoefficientModule,
    tol: f64,
) -> Result<CohomologySummary, CohomologyError> {
    let mats = cochain_matrices(rho, module)?;
    Ok(summary_from_matrices(&mats, module.tag, tol))
}

pub(crate) fn summary_from_matrices(mats: &CochainMatrices, tag: ModuleTag, tol: f64) -> CohomologySummary {
    let d = mats.module_dim;
    let cols = mats.cocycle.ncols();
    let rz: RankInfo = rank(&mats.cocycle, tol);
    let rb: RankInfo = rank(&mats.coboundary, tol);
    let dim_z1 = cols - rz.rank;
    let dim_b1 = rb.rank;
    CohomologySummary {
        module: tag,
        module_dim: d,
        dim_z1,
        dim_b1,
        dim_h1: dim_z1.saturating_sub(dim_b1),
        dim_h0: d - rb.rank,
        cocycle_singular_values: rz.singular_values,
        coboundary_singular_values: rb.singular_values,
        rank_tol: tol,
        flagged: rz.borderline || rb.borderline || dim_b1 > dim_z1,
    }
}

/// A 1-cochain: one module vector per generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cocycle {
    pub module: ModuleTag,
    pub values: Vec<Vec<f64>>,
}

impl Cocycle {
    pub fn from_flat(module: ModuleTag, v: &DVector<f64>, d: usize) -> Self {
        Self { module, values: v.as_slice().chunks(d).map(|c| c.to_vec()).collect() }
    }

    pub fn flat(&self) -> DVector<f64> {
        DVector::from_iterator(self.values.iter().map(Vec::len).sum(), self.values.iter().flatten().copied())
    }

    /// Values as su(3) elements (original coordinates) via the module basis.
    pub fn to_lie(&self, module: &CoefficientModule) -> Vec<crate::su3::LieAlg3> {
        self.values.iter().map(|v| module.to_lie(v)).collect()
    }
}

/// Orthonormal basis of `Z^1` intersected with the orthogonal complement of `B^1`.
pub fn h1_basis(rho: &Representation, module: &CoefficientModule, tol: f64) -> Result<Vec<Cocycle>, CohomologyError> {
    let mats = cochain_matrices(rho, module)?;
    Ok(h1_basis_from_matrices(&mats, module.tag, tol))
}

pub(crate) fn h1_basis_from_matrices(mats: &CochainMatrices, tag: ModuleTag, tol: f64) -> Vec<Cocycle> {
    let cols = mats.cocycle.ncols();
    let stacked = vstack(&[mats.cocycle.clone(), mats.coboundary.transpose()], cols);
    let info = rank(&stacked, tol);
    let ns = null_space(&stacked, info.threshold);
    (0..ns.ncols()).map(|k| Cocycle::from_flat(tag, &ns.column(k).into_owned(), mats.module_dim)).collect()
}

/// Orthonormal basis (columns) of the cocycle space `Z^1`.
pub fn z1_basis(mats: &CochainMatrices, tol: f64) -> DMatrix<f64> {
    let info = rank(&mats.cocycle, tol);
    null_space(&mats.cocycle, info.threshold)
}
