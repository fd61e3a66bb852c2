//! Representations of finitely presented groups into SU(3).

mod classify;
mod dedup;
mod solve;

pub use classify::{classify_stabilizer, commutant_operator, StabilizerClass, StabilizerInfo, StabilizerTag};
pub use dedup::{deduplicate, fingerprint, fingerprint_distance, ConjugacyClass};
pub use solve::{solve_representations, SolveOutcome, SolverConfig};

use crate::presentation::{GroupPresentation, Word};
use crate::su3::{fro, CMat3, UnitaryMatrix3, MEMBERSHIP_TOL};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("expected {expected} generator images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("image of generator {0} is not of the form block(A, 1) with A in SU(2)")]
    NotSu2Block(usize),
    #[error("relator residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { residual: f64, tol: f64 },
    #[error("{0}")]
    Frame(#[from] crate::su3::Su3Error),
}

/// Target group of a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    /// SU(2) embedded in the upper-left block of SU(3).
    #[serde(rename = "su2")]
    Su2InSu3,
    #[serde(rename = "su3")]
    Su3,
}

impl GroupKind {
    /// Real dimension of the group, equal to the solver's tangent dimension.
    pub fn dim(self) -> usize {
        match self {
            GroupKind::Su2InSu3 => 3,
            GroupKind::Su3 => 8,
        }
    }
}

/// Images of the generators of a presentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    presentation: GroupPresentation,
    group: GroupKind,
    images: Vec<UnitaryMatrix3>,
    residual: f64,
}

pub(crate) fn su2_block_defect(m: &UnitaryMatrix3) -> f64 {
    let a = m.matrix();
    [a[(0, 2)], a[(1, 2)], a[(2, 0)], a[(2, 1)], a[(2, 2)] - crate::C64::new(1.0, 0.0)]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

impl Representation {
    /// Build a representation and compute its relator residual.
    pub fn new(presentation: GroupPresentation, group: GroupKind, images: Vec<UnitaryMatrix3>) -> Result<Self, RepError> {
        if images.len() != presentation.num_generators() {
            return Err(RepError::WrongImageCount { expected: presentation.num_generators(), got: images.len() });
        }
        for (i, m) in images.iter().enumerate() {
            UnitaryMatrix3::new(*m.matrix())?;
            if group == GroupKind::Su2InSu3 && su2_block_defect(m) > MEMBERSHIP_TOL {
                return Err(RepError::NotSu2Block(i));
            }
        }
        let mut r = Self { presentation, group, images, residual: 0.0 };
        r.residual = relator_residual(&r);
        Ok(r)
    }

    /// All generators sent to the identity.
    pub fn trivial(presentation: GroupPresentation, group: GroupKind) -> Self {
        let n = presentation.num_generators();
        Self::new(presentation, group, vec![UnitaryMatrix3::identity(); n]).expect("identity images")
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn images(&self) -> &[UnitaryMatrix3] {
        &self.images
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Ordered product of generator images along `w`.
    pub fn word_holonomy(&self, w: &Word) -> UnitaryMatrix3 {
        word_holonomy(&self.images, w)
    }

    /// `g rho g^-1`, as an SU(3) representation.
    pub fn conjugated(&self, g: &UnitaryMatrix3) -> Representation {
        let images = self.images.iter().map(|m| UnitaryMatrix3::new_unchecked(g.conjugate(m.matrix()))).collect();
        let group = if self.group == GroupKind::Su2InSu3 && g.matrix()[(2, 2)].norm() > 1.0 - 1e-12 {
            GroupKind::Su2InSu3
        } else {
            GroupKind::Su3
        };
        let mut r = Representation { presentation: self.presentation.clone(), group, images, residual: 0.0 };
        r.residual = relator_residual(&r);
        r
    }

    /// Same images, regarded as an SU(3) representation.
    pub fn as_su3(&self) -> Representation {
        Representation { group: GroupKind::Su3, ..self.clone() }
    }
}

/// Ordered product of `images` along `w` (inverse letters use the adjoint).
pub fn word_holonomy(images: &[UnitaryMatrix3], w: &Word) -> UnitaryMatrix3 {
    let mut m = CMat3::identity();
    for l in w.letters() {
        let g = images[l.generator].matrix();
        m = if l.exponent > 0 { m * g } else { m * g.adjoint() };
    }
    UnitaryMatrix3::new_unchecked(m)
}

/// `max_i ||rho(r_i) - I||_F`.
pub fn relator_residual(rho: &Representation) -> f64 {
    rho.presentation
        .relators()
        .iter()
        .map(|r| fro(&(rho.word_holonomy(r).matrix() - CMat3::identity())))
        .fold(0.0, f64::max)
}
