use super::{cochain_matrices, summary_from_matrices, z1_basis, CoefficientModule, CohomologyError, ModuleTag};
use crate::linalg::orthonormalize;
use crate::repvariety::{classify_stabilizer, Representation, StabilizerTag};
use crate::su3::FRAME_TOL;
use crate::C64;
use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

/// Hamilton quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// `a + j b` for complex `a, b` (complex numbers spanned by `1, i`).
    pub fn from_pair(a: C64, b: C64) -> Self {
        // j (c + d i) = c j - d k
        Self::new(a.re, a.im, b.re, -b.im)
    }

    /// Inverse of [`Quaternion::from_pair`].
    pub fn to_pair(self) -> (C64, C64) {
        (C64::new(self.w, self.x), C64::new(self.y, -self.z))
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

/// Right multiplication of `v` in C^2 by `h = h1 + j h2`:
/// `v h = (h1 v1 - h2 conj(v2), h2 conj(v1) + h1 v2)`.
pub fn right_mul(v: [C64; 2], h: (C64, C64)) -> [C64; 2] {
    let (h1, h2) = h;
    [h1 * v[0] - h2 * v[1].conj(), h2 * v[0].conj() + h1 * v[1]]
}

// Right action on a stacked h_perp cochain in module coordinates.
fn right_mul_cochain(v: &DVector<f64>, h: (C64, C64)) -> DVector<f64> {
    let mut out = v.clone();
    for c in 0..v.len() / 4 {
        let z = [C64::new(v[4 * c], v[4 * c + 1]), C64::new(v[4 * c + 2], v[4 * c + 3])];
        let r = right_mul(z, h);
        out[4 * c] = r[0].re;
        out[4 * c + 1] = r[0].im;
        out[4 * c + 2] = r[1].re;
        out[4 * c + 3] = r[1].im;
    }
    out
}

/// Result of [`quaternion_structure_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuaternionReport {
    pub trials: usize,
    /// Largest relative cocycle residual of `z h` over random cocycles `z`.
    pub max_z1_residual: f64,
    /// Largest relative distance of `b h` from `B^1` over random coboundaries `b`.
    pub max_b1_residual: f64,
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    pub dim_h1_divisible_by_4: bool,
}

/// Verify that `Z^1` and `B^1` with coefficients in `h_perp` are closed
/// under right multiplication by quaternions.
pub fn quaternion_structure_check<R: Rng + ?Sized>(
    rho: &Representation,
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<QuaternionReport, CohomologyError> {
    let info = classify_stabilizer(rho, super::MAX_RESIDUAL).map_err(|e| CohomologyError::ClassMismatch(e.to_string()))?;
    if info.class.tag != StabilizerTag::ReducibleU1 {
        return Err(CohomologyError::ClassMismatch(format!("expected ReducibleU1, found {:?}", info.class.tag)));
    }
    let frame = info.frame.ok_or_else(|| CohomologyError::ClassMismatch("no reduction frame".into()))?;
    let one = C64::new(1.0, 0.0);
    if rho.images().iter().any(|m| (frame.to_frame(m.matrix())[(2, 2)] - one).norm() > FRAME_TOL) {
        return Err(CohomologyError::ModuleIncompatible("quaternionic structure needs images in SU(2) x 1".into()));
    }
    let module = CoefficientModule::new(ModuleTag::HperpPart, Some(frame))?;
    let mats = cochain_matrices(rho, &module)?;
    let summary = summary_from_matrices(&mats, ModuleTag::HperpPart, tol);
    let z1 = z1_basis(&mats, tol);
    let b1 = orthonormalize(&mats.coboundary, 1e-8);
    let cnorm = mats.cocycle.norm().max(1.0);
    let mut gauss = |n: usize| DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
    let (mut zr, mut br) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let hv = gauss(4);
        let h = (C64::new(hv[0], hv[1]), C64::new(hv[2], hv[3]));
        let hn = hv.norm();
        if z1.ncols() > 0 {
            let z = &z1 * gauss(z1.ncols());
            let zh = right_mul_cochain(&z, h);
            zr = zr.max((&mats.cocycle * &zh).norm() / (cnorm * z.norm() * hn));
        }
        if b1.ncols() > 0 {
            let b = &b1 * gauss(b1.ncols());
            let bh = right_mul_cochain(&b, h);
            let proj = &b1 * (b1.transpose() * &bh);
            br = br.max((&bh - proj).norm() / (b.norm() * hn));
        }
    }
    Ok(QuaternionReport {
        trials,
        max_z1_residual: zr,
        max_b1_residual: br,
        dim_z1: summary.dim_z1,
        dim_b1: summary.dim_b1,
        dim_h1: summary.dim_h1,
        dim_h1_divisible_by_4: summary.dim_h1 % 4 == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_quaternion_acts_trivially() {
        let v = [C64::new(0.3, -1.0), C64::new(2.0, 0.5)];
        assert_eq!(right_mul(v, (C64::new(1.0, 0.0), C64::new(0.0, 0.0))), v);
    }

    #[test]
    fn pair_round_trip() {
        let q = Quaternion::from_pair(C64::new(1.0, 2.0), C64::new(3.0, 4.0));
        assert_eq!(q.to_pair(), (C64::new(1.0, 2.0), C64::new(3.0, 4.0)));
    }

    #[test]
    fn hamilton_relations() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(i * j * k, Quaternion::new(-1.0, 0.0, 0.0, 0.0));
    }
}
