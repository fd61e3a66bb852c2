//! SU(3) and su(3) kernel with explicit numerical tolerances.

mod geta;
pub mod random;
mod split;

pub use geta::{g_eta_conjugator, g_eta_find, g_eta_member, g_eta_residual};
pub use split::{hperp_to_lie, j_action, split_h_hperp, HperpVector, ReductionFrame};

use crate::C64;
use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// 3x3 complex matrix.
pub type CMat3 = Matrix3<C64>;

/// Group membership tolerance (Frobenius norm of `M^dag M - I` and `|det M - 1|`).
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Tolerance for fitting a reduction frame to a set of images.
pub const FRAME_TOL: f64 = 1e-8;
/// Default tolerance for trace-based conjugacy tests.
pub const DEFAULT_CONJ_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su3Error {
    #[error("matrix is not in SU(3): unitarity defect {unitarity:.3e}, determinant defect {det:.3e}")]
    NotSpecialUnitary { unitarity: f64, det: f64 },
    #[error("matrix is not in su(3): hermiticity defect {hermiticity:.3e}, trace {trace:.3e}")]
    NotLieAlgebra { hermiticity: f64, trace: f64 },
    #[error("matrix is singular (smallest singular value {0:.3e})")]
    Singular(f64),
    #[error("invalid reduction frame: {0}")]
    InvalidFrame(String),
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Frobenius norm of a complex 3x3 matrix.
pub fn fro(m: &CMat3) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// An element of SU(3).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitaryMatrix3(#[serde(with = "crate::serde_mat")] CMat3);

impl UnitaryMatrix3 {
    /// Checked constructor.
    pub fn new(m: CMat3) -> Result<Self, Su3Error> {
        let unitarity = fro(&(m.adjoint() * m - CMat3::identity()));
        let det = (m.determinant() - C64::new(1.0, 0.0)).norm();
        if unitarity > MEMBERSHIP_TOL || det > MEMBERSHIP_TOL {
            return Err(Su3Error::NotSpecialUnitary { unitarity, det });
        }
        Ok(Self(m))
    }

    /// Wrap a matrix that is known to lie in SU(3) up to rounding.
    pub fn new_unchecked(m: CMat3) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(CMat3::identity())
    }

    /// `diag(d0, d1, d2)`; the entries must be unit complex numbers with product 1.
    pub fn diag(d0: C64, d1: C64, d2: C64) -> Result<Self, Su3Error> {
        Self::new(CMat3::from_diagonal(&nalgebra::Vector3::new(d0, d1, d2)))
    }

    /// `block(a, conj(det a))` for a 2x2 unitary `a`.
    pub fn from_su2_block(a: &nalgebra::Matrix2<C64>) -> Result<Self, Su3Error> {
        let mut m = CMat3::zeros();
        m.view_mut((0, 0), (2, 2)).copy_from(a);
        m[(2, 2)] = a.determinant().conj();
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMat3 {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Conjugation `self * m * self^-1`.
    pub fn conjugate(&self, m: &CMat3) -> CMat3 {
        self.0 * m * self.0.adjoint()
    }

    /// Upper-left 2x2 block.
    pub fn upper_block(&self) -> nalgebra::Matrix2<C64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        fro(&(self.0 - other.0))
    }

    /// Re-project onto SU(3) to remove accumulated rounding.
    pub fn renormalized(&self) -> Self {
        project_su3(&self.0).unwrap_or(*self)
    }

    /// Eigenvalues from a Hermitian-free eigensolver (complex Schur form).
    pub fn eigenvalues(&self) -> [C64; 3] {
        let schur = nalgebra::Schur::new(self.0);
        let (_, t) = schur.unpack();
        [t[(0, 0)], t[(1, 1)], t[(2, 2)]]
    }
}

impl Mul for UnitaryMatrix3 {
    type Output = UnitaryMatrix3;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Mul for &UnitaryMatrix3 {
    type Output = UnitaryMatrix3;
    fn mul(self, rhs: Self) -> UnitaryMatrix3 {
        UnitaryMatrix3(self.0 * rhs.0)
    }
}

/// An element of su(3): traceless anti-Hermitian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LieAlg3(#[serde(with = "crate::serde_mat")] CMat3);

impl LieAlg3 {
    /// Checked constructor.
    pub fn new(m: CMat3) -> Result<Self, Su3Error> {
        let hermiticity = fro(&(m.adjoint() + m));
        let trace = m.trace().norm();
        if hermiticity > MEMBERSHIP_TOL || trace > MEMBERSHIP_TOL {
            return Err(Su3Error::NotLieAlgebra { hermiticity, trace });
        }
        Ok(Self(m))
    }

    pub fn new_unchecked(m: CMat3) -> Self {
        Self(m)
    }

    /// Orthogonal projection of an arbitrary matrix onto su(3).
    pub fn project(m: &CMat3) -> Self {
        let a = (m - m.adjoint()) * c(0.5, 0.0);
        let t = a.trace() / c(3.0, 0.0);
        Self(a - CMat3::identity() * t)
    }

    pub fn zero() -> Self {
        Self(CMat3::zeros())
    }

    pub fn matrix(&self) -> &CMat3 {
        &self.0
    }

    /// Build from coordinates in the orthonormal basis [`su3_basis`].
    pub fn from_coords(x: &[f64]) -> Self {
        assert_eq!(x.len(), 8, "su(3) has 8 coordinates");
        let b = su3_basis();
        let mut m = CMat3::zeros();
        for (k, &v) in x.iter().enumerate() {
            m += b[k] * c(v, 0.0);
        }
        Self(m)
    }

    /// Coordinates in the orthonormal basis [`su3_basis`].
    pub fn coords(&self) -> [f64; 8] {
        let b = su3_basis();
        std::array::from_fn(|k| inner(&self.0, &b[k]))
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Self {
        Self(self.0 * other.0 - other.0 * self.0)
    }

    /// Inner product `-Re tr(ab)`.
    pub fn inner(&self, other: &Self) -> f64 {
        inner(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }

    /// `Ad_g(self) = g self g^-1`.
    pub fn ad(&self, g: &UnitaryMatrix3) -> Self {
        Self(g.conjugate(&self.0))
    }

    /// Matrix exponential, retracted onto SU(3).
    pub fn exp(&self) -> UnitaryMatrix3 {
        // i * self is Hermitian, so exp(self) = V diag(exp(-i lambda)) V^dag.
        let h = self.0 * c(0.0, 1.0);
        let h = (h + h.adjoint()) * c(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::new(h);
        let d = CMat3::from_diagonal(&eig.eigenvalues.map(|l| C64::from_polar(1.0, -l)));
        let m = eig.eigenvectors * d * eig.eigenvectors.adjoint();
        project_su3(&m).expect("exponential is invertible")
    }
}

impl Add for LieAlg3 {
    type Output = LieAlg3;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for LieAlg3 {
    type Output = LieAlg3;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for LieAlg3 {
    type Output = LieAlg3;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul<f64> for LieAlg3 {
    type Output = LieAlg3;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * c(rhs, 0.0))
    }
}

/// `-Re tr(ab)`, the positive definite pairing on su(3).
pub fn inner(a: &CMat3, b: &CMat3) -> f64 {
    -(a * b).trace().re
}

/// Gell-Mann matrices `lambda_1 .. lambda_8`.
pub fn gell_mann() -> [CMat3; 8] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let s3 = 1.0 / 3f64.sqrt();
    [
        CMat3::new(z, o, z, o, z, z, z, z, z),
        CMat3::new(z, -i, z, i, z, z, z, z, z),
        CMat3::new(o, z, z, z, -o, z, z, z, z),
        CMat3::new(z, z, o, z, z, z, o, z, z),
        CMat3::new(z, z, -i, z, z, z, i, z, z),
        CMat3::new(z, z, z, z, z, o, z, o, z),
        CMat3::new(z, z, z, z, z, -i, z, i, z),
        CMat3::new(o * s3, z, z, z, o * s3, z, z, z, o * (-2.0 * s3)),
    ]
}

/// Orthonormal basis `i lambda_k / sqrt 2` of su(3) for the pairing `-tr(ab)`.
pub fn su3_basis() -> [CMat3; 8] {
    let f = c(0.0, std::f64::consts::FRAC_1_SQRT_2);
    gell_mann().map(|l| l * f)
}

/// Nearest element of SU(3): polar factor with the determinant phase removed.
pub fn project_su3(m: &CMat3) -> Result<UnitaryMatrix3, Su3Error> {
    let svd = m.svd(true, true);
    let smin = svd.singular_values.min();
    let smax = svd.singular_values.max();
    if !(smin > 1e-12 * smax.max(1.0)) {
        return Err(Su3Error::Singular(smin));
    }
    let u = svd.u.expect("left factor") * svd.v_t.expect("right factor");
    let phase = u.determinant().arg();
    let fix = C64::from_polar(1.0, -phase / 3.0);
    Ok(UnitaryMatrix3(u * fix))
}

/// Coefficients `(c2, c1) = (tr M, conj tr M)` of `p(x) = x^3 - c2 x^2 + c1 x - 1`.
pub fn char_poly(m: &UnitaryMatrix3) -> (C64, C64) {
    let t = m.trace();
    (t, t.conj())
}

/// Roots of `x^3 - c2 x^2 + c1 x - 1` by the Aberth-Ehrlich iteration.
pub fn cubic_roots(c2: C64, c1: C64) -> [C64; 3] {
    let one = c(1.0, 0.0);
    let p = |x: C64| ((x - c2) * x + c1) * x - one;
    let dp = |x: C64| (x * c(3.0, 0.0) - c2 * c(2.0, 0.0)) * x + c1;
    let mut z: [C64; 3] =
        std::array::from_fn(|k| C64::from_polar(1.0, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / 3.0));
    for _ in 0..200 {
        let mut worst = 0.0f64;
        let old = z;
        for k in 0..3 {
            let ratio = p(old[k]) / dp(old[k]);
            let mut s = c(0.0, 0.0);
            for j in 0..3 {
                if j != k {
                    s += one / (old[k] - old[j]);
                }
            }
            let w = ratio / (one - ratio * s);
            if w.is_finite() {
                z[k] = old[k] - w;
                worst = worst.max(w.norm());
            }
        }
        if worst < 1e-16 {
            break;
        }
    }
    // A final Newton step on each simple root sharpens the last digits.
    for r in z.iter_mut() {
        let d = dp(*r);
        if d.norm() > 1e-6 {
            let step = p(*r) / d;
            *r -= step;
        }
    }
    z.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    z
}

/// Eigenvalues of `M` recovered from its characteristic polynomial.
pub fn eigenvalues_from_char_poly(m: &UnitaryMatrix3) -> [C64; 3] {
    let (c2, c1) = char_poly(m);
    cubic_roots(c2, c1)
}

/// Distance between two multisets of three complex numbers (best matching).
pub fn multiset_distance(a: &[C64; 3], b: &[C64; 3]) -> f64 {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS
        .iter()
        .map(|p| (0..3).map(|k| (a[k] - b[p[k]]).norm()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Conjugacy test for single SU(3) elements: `|tr M - tr N| <= tol`.
pub fn same_class(m: &UnitaryMatrix3, n: &UnitaryMatrix3, tol: f64) -> bool {
    (m.trace() - n.trace()).norm() <= tol
}

/// Smallest pairwise gap between eigenvalues of `m`.
pub fn eigenvalue_gap(m: &UnitaryMatrix3) -> f64 {
    let e = m.eigenvalues();
    (e[0] - e[1]).norm().min((e[1] - e[2]).norm()).min((e[0] - e[2]).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_char_poly() {
        let (c2, c1) = char_poly(&UnitaryMatrix3::identity());
        assert_eq!(c2, c(3.0, 0.0));
        assert_eq!(c1, c(3.0, 0.0));
    }

    #[test]
    fn diag_char_poly() {
        let m = UnitaryMatrix3::diag(c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)).unwrap();
        let (c2, c1) = char_poly(&m);
        assert_eq!(c2, c(-1.0, 0.0));
        assert_eq!(c1, c(-1.0, 0.0));
        let r = cubic_roots(c2, c1);
        let want = [c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
        assert!(multiset_distance(&r, &want) < 1e-6);
    }

    #[test]
    fn project_scaled_identity() {
        let p = project_su3(&(CMat3::identity() * c(2.0, 0.0))).unwrap();
        assert!(p.distance(&UnitaryMatrix3::identity()) < 1e-14);
    }

    #[test]
    fn project_rejects_singular() {
        assert!(matches!(project_su3(&CMat3::zeros()), Err(Su3Error::Singular(_))));
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = su3_basis();
        for i in 0..8 {
            assert!(LieAlg3::new(b[i]).is_ok());
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&b[i], &b[j]) - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exp_of_diagonal() {
        let x = LieAlg3::new(CMat3::from_diagonal(&nalgebra::Vector3::new(c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)))).unwrap();
        let e = x.exp();
        assert!((e.matrix()[(0, 0)] - C64::from_polar(1.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn omega_not_same_class() {
        let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let m = UnitaryMatrix3::diag(w, w, w).unwrap();
        assert!(!same_class(&UnitaryMatrix3::identity(), &m, 1e-6));
    }
}
