use super::CohomologyError;
use crate::repvariety::Representation;
use crate::su3::{inner, su3_basis, CMat3, HperpVector, LieAlg3, ReductionFrame, UnitaryMatrix3, FRAME_TOL};
use crate::C64;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleTag {
    #[serde(rename = "su3")]
    Su3Adjoint,
    #[serde(rename = "h")]
    HPart,
    #[serde(rename = "hperp")]
    HperpPart,
    #[serde(rename = "su2")]
    Su2Adjoint,
}

impl ModuleTag {
    pub fn dim(self) -> usize {
        match self {
            ModuleTag::Su3Adjoint => 8,
            ModuleTag::HPart | ModuleTag::HperpPart => 4,
            ModuleTag::Su2Adjoint => 3,
        }
    }
}

/// Coefficient module for twisted cohomology: su(3), its block part `h`,
/// the complement `h_perp` (a copy of C^2), or the su(2) block.
///
/// Each module carries an orthonormal basis for `-tr(ab)` in original
/// coordinates, so the action of `M` is `A_kl = -tr(b_k M b_l M^-1)`.
/// For `h_perp` the basis is `(1,0), (i,0), (0,1), (0,i)` scaled by
/// `1/sqrt 2` in frame coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientModule {
    pub tag: ModuleTag,
    pub frame: Option<ReductionFrame>,
    basis: Vec<CMat3>,
}

impl CoefficientModule {
    /// Build a module; `h` and `h_perp` require a frame, `su2` defaults to the
    /// standard frame.
    pub fn new(tag: ModuleTag, frame: Option<ReductionFrame>) -> Result<Self, CohomologyError> {
        let frame = match (tag, frame) {
            (ModuleTag::HPart | ModuleTag::HperpPart, None) => {
                return Err(CohomologyError::ModuleIncompatible(format!("{tag:?} requires a reduction frame")))
            }
            (ModuleTag::Su2Adjoint, None) => Some(ReductionFrame::standard()),
            (ModuleTag::Su3Adjoint, _) => None,
            (_, f) => f,
        };
        let b = su3_basis();
        let local: Vec<CMat3> = match tag {
            ModuleTag::Su3Adjoint => b.to_vec(),
            ModuleTag::HPart => vec![b[0], b[1], b[2], b[7]],
            ModuleTag::Su2Adjoint => vec![b[0], b[1], b[2]],
            ModuleTag::HperpPart => {
                let s = C64::new(FRAC_1_SQRT_2, 0.0);
                let i = C64::new(0.0, FRAC_1_SQRT_2);
                let z = C64::new(0.0, 0.0);
                [(s, z), (i, z), (z, s), (z, i)].iter().map(|&(a, c)| HperpVector::new(a, c).to_matrix()).collect()
            }
        };
        let basis = match &frame {
            Some(f) => local.iter().map(|m| f.from_frame(m)).collect(),
            None => local,
        };
        Ok(Self { tag, frame, basis })
    }

    pub fn su3() -> Self {
        Self::new(ModuleTag::Su3Adjoint, None).expect("su3 module")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat3] {
        &self.basis
    }

    /// Real matrix of the adjoint action of `m` in the module basis.
    pub fn action(&self, m: &UnitaryMatrix3) -> DMatrix<f64> {
        let d = self.dim();
        let moved: Vec<CMat3> = self.basis.iter().map(|b| m.conjugate(b)).collect();
        DMatrix::from_fn(d, d, |k, l| inner(&self.basis[k], &moved[l]))
    }

    /// Module coordinates to an element of su(3).
    pub fn to_lie(&self, v: &[f64]) -> LieAlg3 {
        let mut m = CMat3::zeros();
        for (b, &x) in self.basis.iter().zip(v) {
            m += b * C64::new(x, 0.0);
        }
        LieAlg3::new_unchecked(m)
    }

    /// Orthogonal projection of an su(3) element to module coordinates.
    pub fn coords(&self, x: &LieAlg3) -> Vec<f64> {
        self.basis.iter().map(|b| inner(b, x.matrix())).collect()
    }

    /// Check that the images preserve the module.
    pub fn check_compatible(&self, rho: &Representation) -> Result<(), CohomologyError> {
        let Some(f) = &self.frame else { return Ok(()) };
        let defect = f.block_defect(rho.images());
        if defect > FRAME_TOL {
            return Err(CohomologyError::ModuleIncompatible(format!(
                "images are not block diagonal in the frame (defect {defect:.3e})"
            )));
        }
        if self.tag == ModuleTag::Su2Adjoint {
            let one = C64::new(1.0, 0.0);
            let bad = rho.images().iter().any(|m| (f.to_frame(m.matrix())[(2, 2)] - one).norm() > FRAME_TOL);
            if bad {
                return Err(CohomologyError::ModuleIncompatible("su2 module needs images in SU(2) x 1".into()));
            }
        }
        Ok(())
    }
}
