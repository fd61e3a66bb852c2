use super::{c, CMat3, UnitaryMatrix3};
use crate::C64;
use nalgebra::Matrix2;
use std::f64::consts::{PI, SQRT_2};

const GRID: usize = 1024;

/// The conjugator `P` with `P^-1 M P` block diagonal for `M` in `G_eta`.
pub fn g_eta_conjugator(eta: f64) -> CMat3 {
    let w = C64::from_polar(1.0, eta);
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    CMat3::new(o, z, o, w, z, -w, z, c(SQRT_2, 0.0), z) * c(std::f64::consts::FRAC_1_SQRT_2, 0.0)
}

/// `P block(w, e^{i psi}) P^-1`, an element of `G_eta` (`det w * e^{i psi}` must be 1).
pub fn g_eta_member(eta: f64, w: &Matrix2<C64>, psi: f64) -> UnitaryMatrix3 {
    let mut b = CMat3::zeros();
    b.view_mut((0, 0), (2, 2)).copy_from(w);
    b[(2, 2)] = C64::from_polar(1.0, psi);
    let p = g_eta_conjugator(eta);
    UnitaryMatrix3::new_unchecked(p * b * p.adjoint())
}

// Pattern equations: M00 = M11, M10 = w^2 M01, M12 = w M02, M21 = conj(w) M20.
fn pattern_terms(m: &CMat3) -> [(C64, C64, f64); 3] {
    [(m[(1, 0)], m[(0, 1)], 2.0), (m[(1, 2)], m[(0, 2)], 1.0), (m[(2, 1)], m[(2, 0)], -1.0)]
}

/// Root-sum-square defect of the `G_eta` entry pattern at angle `eta`.
pub fn g_eta_residual(m: &UnitaryMatrix3, eta: f64) -> f64 {
    let mm = m.matrix();
    let mut f = (mm[(0, 0)] - mm[(1, 1)]).norm_sqr();
    for (a, b, k) in pattern_terms(mm) {
        f += (a - C64::from_polar(1.0, k * eta) * b).norm_sqr();
    }
    f.sqrt()
}

// Squared residual (without the eta-independent part) and its first two derivatives.
fn objective(mm: &CMat3, eta: f64) -> (f64, f64, f64) {
    let (mut f, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for (a, b, k) in pattern_terms(mm) {
        let q = a.conj() * C64::from_polar(1.0, k * eta) * b;
        f += a.norm_sqr() + b.norm_sqr() - 2.0 * q.re;
        d1 += 2.0 * k * q.im;
        d2 += 2.0 * k * k * q.re;
    }
    (f, d1, d2)
}

/// Find `eta in [0, 2pi)` with `M` in `G_eta` to tolerance `tol`.
pub fn g_eta_find(m: &UnitaryMatrix3, tol: f64) -> Option<f64> {
    let mm = m.matrix();
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..GRID {
        let eta = 2.0 * PI * k as f64 / GRID as f64;
        let f = objective(mm, eta).0;
        if f < best.0 {
            best = (f, eta);
        }
    }
    let mut eta = best.1;
    for _ in 0..50 {
        let (_, d1, d2) = objective(mm, eta);
        if d2 <= 1e-14 || d1.abs() < 1e-16 {
            break;
        }
        let step = (d1 / d2).clamp(-PI / GRID as f64 * 4.0, PI / GRID as f64 * 4.0);
        eta -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let eta = eta.rem_euclid(2.0 * PI);
    (g_eta_residual(m, eta) <= tol).then_some(eta)
}
