//! Holonomy calculus for connections on the trivial SU(3) bundle over a circle.
//!
//! A connection is a function `a: [0,1] -> su(3)` sampled on a uniform grid.
//! Parallel transport solves `P' = -a P`, `P(0) = I`, and the holonomy is
//! `P(1)`.

mod check;
mod hessian;
mod perturb;

pub use check::{
    closed_form_check, derivative_check, random_connection, ClosedFormReport, DerivativeCheckConfig, DerivativeReport,
    DerivativeTrial,
};

pub use hessian::{
    hessian_closed_form, synthesize, verify_closed_form, CaseCheck, HessianCase, Segment, SynthesizedLoop,
};
pub use perturb::{
    perturbation_derivative, perturbation_gradient_norm_check, perturbation_value, EtaProfile, GradientNormReport,
    PerturbationSpec, TracePolynomial,
};

use crate::su3::{CMat3, LieAlg3, UnitaryMatrix3};
use crate::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default number of grid intervals.
pub const DEFAULT_N: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HolError {
    #[error("grid needs an even number of at least 16 intervals, got {0}")]
    BadGrid(usize),
    #[error("grid mismatch: {0} vs {1} intervals")]
    GridMismatch(usize, usize),
    #[error("sample {0} is not in su(3)")]
    InvalidSample(usize),
    #[error("holonomy {0} is not of the form block(L, 1)")]
    NotBlockForm(String),
}

/// Samples `a(k/N)`, `k = 0..=N`, of an su(3)-valued function on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopConnection {
    samples: Vec<LieAlg3>,
}

impl LoopConnection {
    /// `samples` has `N + 1` entries with `N` even and at least 16.
    pub fn new(samples: Vec<LieAlg3>) -> Result<Self, HolError> {
        let n = samples.len().saturating_sub(1);
        if n < 16 || n % 2 != 0 {
            return Err(HolError::BadGrid(n));
        }
        for (k, s) in samples.iter().enumerate() {
            LieAlg3::new(*s.matrix()).map_err(|_| HolError::InvalidSample(k))?;
        }
        Ok(Self { samples })
    }

    /// Sample `f` at `k/n` for `k = 0..=n`.
    pub fn from_fn<F: FnMut(f64) -> LieAlg3>(n: usize, mut f: F) -> Result<Self, HolError> {
        Self::new((0..=n).map(|k| f(k as f64 / n as f64)).collect())
    }

    pub fn zero(n: usize) -> Result<Self, HolError> {
        Self::from_fn(n, |_| LieAlg3::zero())
    }

    /// Number of grid intervals.
    pub fn n(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> &[LieAlg3] {
        &self.samples
    }

    /// `self + t * other`.
    pub fn add_scaled(&self, other: &Self, t: f64) -> Result<Self, HolError> {
        if self.n() != other.n() {
            return Err(HolError::GridMismatch(self.n(), other.n()));
        }
        Ok(Self { samples: self.samples.iter().zip(&other.samples).map(|(a, b)| *a + *b * t).collect() })
    }

    /// Pointwise `g a g^-1`.
    pub fn conjugated(&self, g: &UnitaryMatrix3) -> Self {
        Self { samples: self.samples.iter().map(|a| a.ad(g)).collect() }
    }

    /// `sqrt(int_0^1 -tr(a^2))` by Simpson's rule.
    pub fn l2_norm(&self) -> f64 {
        let v: Vec<f64> = self.samples.iter().map(|a| a.inner(a)).collect();
        simpson(&v, 1.0 / self.n() as f64).max(0.0).sqrt()
    }

    /// Degree-5 Lagrange interpolation at `u` from the six nearest grid values.
    pub fn value_at(&self, u: f64) -> CMat3 {
        const W: usize = 6;
        let n = self.n();
        let x = u.clamp(0.0, 1.0) * n as f64;
        let k = (x.floor() as usize).min(n - 1);
        let s0 = (k + 1).saturating_sub(W / 2).min(n + 1 - W);
        let t = x - s0 as f64;
        let mut out = CMat3::zeros();
        for i in 0..W {
            let mut w = 1.0;
            for j in 0..W {
                if j != i {
                    w *= (t - j as f64) / (i as f64 - j as f64);
                }
            }
            out += self.samples[s0 + i].matrix() * C64::new(w, 0.0);
        }
        out
    }
}

/// Composite Simpson's rule on an even number of intervals of width `h`.
pub fn simpson(v: &[f64], h: f64) -> f64 {
    let n = v.len() - 1;
    debug_assert!(n % 2 == 0);
    let mut s = v[0] + v[n];
    for (k, x) in v.iter().enumerate().take(n).skip(1) {
        s += if k % 2 == 1 { 4.0 * x } else { 2.0 * x };
    }
    s * h / 3.0
}

fn simpson_mat(v: &[CMat3], h: f64) -> CMat3 {
    let n = v.len() - 1;
    let mut s = v[0] + v[n];
    for (k, x) in v.iter().enumerate().take(n).skip(1) {
        s += x * C64::new(if k % 2 == 1 { 4.0 } else { 2.0 }, 0.0);
    }
    s * C64::new(h / 3.0, 0.0)
}

// Running integrals int_0^{u_k} at every grid point, fourth order.
fn cumulative_simpson(v: &[CMat3], h: f64) -> Vec<CMat3> {
    let n = v.len() - 1;
    let mut c = vec![CMat3::zeros(); n + 1];
    for k in (2..=n).step_by(2) {
        c[k] = c[k - 2] + (v[k - 2] + v[k - 1] * C64::new(4.0, 0.0) + v[k]) * C64::new(h / 3.0, 0.0);
    }
    for k in (1..n).step_by(2) {
        c[k] = c[k - 1] + (v[k - 1] * C64::new(5.0, 0.0) + v[k] * C64::new(8.0, 0.0) - v[k + 1]) * C64::new(h / 12.0, 0.0);
    }
    c
}

/// Transport `P(u_k)` at every grid point (RK4 with re-projection).
pub fn transport_grid(a: &LoopConnection) -> Vec<UnitaryMatrix3> {
    let n = a.n();
    let h = 1.0 / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut p = UnitaryMatrix3::identity();
    out.push(p);
    for k in 0..n {
        p = (magnus_step(a, k as f64 * h, h) * p).renormalized();
        out.push(p);
    }
    out
}

/// Fourth-order Magnus step for P' = -aP over [u0, u0 + h] with two Gauss nodes.
fn magnus_step(a: &LoopConnection, u0: f64, h: f64) -> UnitaryMatrix3 {
    let d = 3f64.sqrt() / 6.0;
    let a1 = -a.value_at(u0 + (0.5 - d) * h);
    let a2 = -a.value_at(u0 + (0.5 + d) * h);
    let omega = (a1 + a2) * C64::new(h / 2.0, 0.0) + (a2 * a1 - a1 * a2) * C64::new(3f64.sqrt() * h * h / 12.0, 0.0);
    LieAlg3::project(&omega).exp()
}

/// Parallel transport from 0 to `u`.
pub fn parallel_transport(a: &LoopConnection, u: f64) -> UnitaryMatrix3 {
    let n = a.n();
    let u = u.clamp(0.0, 1.0);
    let k = ((u * n as f64).floor() as usize).min(n);
    let grid = transport_grid(a);
    let p = grid[k];
    let u0 = k as f64 / n as f64;
    let h = u - u0;
    if h <= 0.0 {
        return p;
    }
    (magnus_step(a, u0, h) * p).renormalized()
}

/// Holonomy `P(1)`.
pub fn holonomy(a: &LoopConnection) -> UnitaryMatrix3 {
    *transport_grid(a).last().expect("nonempty grid")
}

/// Holonomy with its first and second derivatives.
#[derive(Clone, Debug)]
pub struct HolonomyDerivatives {
    pub holonomy: UnitaryMatrix3,
    /// `d/dt hol(A + t a)` at `t = 0`, equal to `-hol(A) int_0^1 P^-1 a P`.
    pub first: CMat3,
    /// `d^2/ds dt tr hol(A + s a + t b)` at `s = t = 0`.
    pub second_tr: C64,
}

/// First and second derivatives of the holonomy.
///
/// With `P` the transport of `A` and `a~ = P^-1 a P`, the first derivative is
/// `-hol(A) int a~` and the second derivative of the trace is
/// `int_0^1 int_0^v tr(hol(A)(a~(v) b~(m) + b~(v) a~(m))) dm dv`.
pub fn holonomy_derivatives(
    base: &LoopConnection,
    a: &LoopConnection,
    b: &LoopConnection,
) -> Result<HolonomyDerivatives, HolError> {
    let n = base.n();
    for t in [a, b] {
        if t.n() != n {
            return Err(HolError::GridMismatch(n, t.n()));
        }
    }
    let h = 1.0 / n as f64;
    let p = transport_grid(base);
    let hol = p[n];
    let tilde = |t: &LoopConnection| -> Vec<CMat3> {
        p.iter().zip(&t.samples).map(|(pk, s)| pk.matrix().adjoint() * s.matrix() * pk.matrix()).collect()
    };
    let at = tilde(a);
    let bt = tilde(b);
    let first = -(hol.matrix() * simpson_mat(&at, h));
    let ca = cumulative_simpson(&at, h);
    let cb = cumulative_simpson(&bt, h);
    let inner: Vec<CMat3> = (0..=n).map(|k| at[k] * cb[k] + bt[k] * ca[k]).collect();
    let second_tr = (hol.matrix() * simpson_mat(&inner, h)).trace();
    Ok(HolonomyDerivatives { holonomy: hol, first, second_tr })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_simpson_is_exact_for_quadratics() {
        let n = 16;
        let h = 1.0 / n as f64;
        let v: Vec<CMat3> = (0..=n).map(|k| CMat3::identity() * C64::new((k as f64 * h).powi(2), 0.0)).collect();
        let c = cumulative_simpson(&v, h);
        for (k, ck) in c.iter().enumerate() {
            let u = k as f64 * h;
            assert!((ck[(0, 0)].re - u.powi(3) / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_odd_grid() {
        assert_eq!(LoopConnection::zero(17).unwrap_err(), HolError::BadGrid(17));
        assert_eq!(LoopConnection::zero(8).unwrap_err(), HolError::BadGrid(8));
    }
}
