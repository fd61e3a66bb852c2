use super::{RepError, Representation};
use crate::linalg::{null_space, singular_values, vstack};
use crate::su3::{inner, su3_basis, LieAlg3, ReductionFrame, UnitaryMatrix3};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Stabilizer type of a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilizerTag {
    Central,
    ReducibleU1,
    AbelianLarge,
    Irreducible,
}

/// Stabilizer tag with the real dimension of the commutant in su(3).
///
/// The commutant dimensions that occur are 8 (central), 4 or 2 (abelian
/// images with stabilizer `S(U(2)xU(1))` or a maximal torus), 1 (stabilizer
/// U(1)) and 0 (irreducible).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerClass {
    pub tag: StabilizerTag,
    pub commutant_dim: usize,
}

/// Output of [`classify_stabilizer`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerInfo {
    pub class: StabilizerClass,
    /// Set for `ReducibleU1`: frame bringing the images into block form.
    pub frame: Option<ReductionFrame>,
    /// Set for `ReducibleU1`: unit generator of the stabilizer's Lie algebra.
    pub u1_generator: Option<LieAlg3>,
    /// Singular values of the stacked commutator operator.
    pub singular_values: Vec<f64>,
    /// Raised when the spectrum has no clear gap or the dimension is not one
    /// of the expected values; rerun with a different tolerance.
    pub flagged: bool,
}

/// Real 8x8 matrix of `v -> Ad_M v - v` in the basis [`su3_basis`].
pub fn commutant_operator(m: &UnitaryMatrix3) -> DMatrix<f64> {
    let b = su3_basis();
    DMatrix::from_fn(8, 8, |k, l| inner(&b[k], &(m.conjugate(&b[l]) - b[l])))
}

/// Relative null threshold for the commutant computation.
pub const COMMUTANT_REL_TOL: f64 = 1e-6;

/// Classify the stabilizer of `rho` from the commutant of its image.
pub fn classify_stabilizer(rho: &Representation, tol: f64) -> Result<StabilizerInfo, RepError> {
    if rho.residual() > tol {
        return Err(RepError::ResidualTooLarge { residual: rho.residual(), tol });
    }
    let blocks: Vec<DMatrix<f64>> = rho.images().iter().map(commutant_operator).collect();
    let stacked = vstack(&blocks, 8);
    let sv = singular_values(&stacked);
    let smax = sv.first().copied().unwrap_or(0.0);
    let thr = COMMUTANT_REL_TOL * smax;
    let null = if smax < 1e-12 { DMatrix::identity(8, 8) } else { null_space(&stacked, thr) };
    let dim = null.ncols();
    let borderline = smax >= 1e-12 && sv.iter().any(|&s| s > thr / 10.0 && s < thr * 10.0);
    let tag = match dim {
        8 => StabilizerTag::Central,
        2..=7 => StabilizerTag::AbelianLarge,
        1 => StabilizerTag::ReducibleU1,
        _ => StabilizerTag::Irreducible,
    };
    let mut flagged = borderline || !matches!(dim, 0 | 1 | 2 | 4 | 8) || dim == 2;
    let (mut frame, mut u1_generator) = (None, None);
    if tag == StabilizerTag::ReducibleU1 {
        let coords: Vec<f64> = null.column(0).iter().copied().collect();
        let v = LieAlg3::from_coords(&coords);
        match ReductionFrame::from_u1_generator(&v) {
            Ok(f) => {
                flagged |= !f.fits(rho.images());
                frame = Some(f);
            }
            Err(_) => flagged = true,
        }
        u1_generator = Some(v);
    }
    Ok(StabilizerInfo {
        class: StabilizerClass { tag, commutant_dim: dim },
        frame,
        u1_generator,
        singular_values: sv,
        flagged,
    })
}
