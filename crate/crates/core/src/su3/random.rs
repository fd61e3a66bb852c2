//! Random sampling of group and algebra elements.

use super::{project_su3, CMat3, LieAlg3, UnitaryMatrix3};
use crate::C64;
use nalgebra::Matrix2;
use rand::Rng;
use rand_distr::StandardNormal;

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-distributed element of SU(3) (QR of a complex Ginibre matrix).
pub fn random_su3<R: Rng + ?Sized>(rng: &mut R) -> UnitaryMatrix3 {
    let g = CMat3::from_fn(|_, _| C64::new(gauss(rng), gauss(rng)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..3 {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..3 {
            q[(i, j)] *= ph;
        }
    }
    project_su3(&q).expect("unitary input")
}

/// Haar-distributed element of SU(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<C64> {
    let v: [f64; 4] = std::array::from_fn(|_| gauss(rng));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let a = C64::new(v[0] / n, v[1] / n);
    let b = C64::new(v[2] / n, v[3] / n);
    Matrix2::new(a, -b.conj(), b, a.conj())
}

/// Haar element of SU(2) embedded as `block(A, 1)`.
pub fn random_su2_in_su3<R: Rng + ?Sized>(rng: &mut R) -> UnitaryMatrix3 {
    UnitaryMatrix3::from_su2_block(&random_su2(rng)).expect("SU(2) block")
}

/// Gaussian element of su(3) with coordinate standard deviation `scale`.
pub fn random_lie<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> LieAlg3 {
    let x: Vec<f64> = (0..8).map(|_| scale * gauss(rng)).collect();
    LieAlg3::from_coords(&x)
}

/// Random complex number with standard normal real and imaginary parts.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gauss(rng), gauss(rng))
}
