use super::{holonomy, holonomy_derivatives, verify_closed_form, CaseCheck, HessianCase, HolError, LoopConnection};
use crate::su3::random::random_lie;
use crate::su3::{fro, HperpVector, LieAlg3};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Random trigonometric polynomial of degree 3 with su(3) coefficients of
/// size `scale / (1 + m)^2`, sampled on `n` intervals.
pub fn random_connection<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Result<LoopConnection, HolError> {
    let c: Vec<(LieAlg3, LieAlg3)> = (0..4)
        .map(|m| {
            let s = scale / (1.0 + m as f64).powi(2);
            (random_lie(rng, s), random_lie(rng, s))
        })
        .collect();
    LoopConnection::from_fn(n, |u| {
        c.iter().enumerate().fold(LieAlg3::zero(), |acc, (m, (a, b))| {
            let t = 2.0 * PI * m as f64 * u;
            acc + *a * t.cos() + *b * t.sin()
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheckConfig {
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    /// Central-difference step for the first derivative.
    pub fd_first: f64,
    /// Step of the four-point mixed difference for the second derivative.
    pub fd_second: f64,
    /// Size of the random tangent directions.
    pub direction_scale: f64,
    pub tol_first: f64,
    pub tol_second: f64,
}

impl Default for DerivativeCheckConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            n: super::DEFAULT_N,
            fd_first: 1e-4,
            fd_second: 1e-3,
            direction_scale: 0.5,
            tol_first: 1e-6,
            tol_second: 1e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeTrial {
    pub first_error: f64,
    pub second_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub config: DerivativeCheckConfig,
    pub trials: Vec<DerivativeTrial>,
    pub max_first_error: f64,
    pub max_second_error: f64,
    pub ok: bool,
}

fn derivative_trial(cfg: &DerivativeCheckConfig, k: usize) -> Result<DerivativeTrial, HolError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(k as u64);
    let base = random_connection(&mut rng, cfg.n, 1.0)?;
    let a = random_connection(&mut rng, cfg.n, cfg.direction_scale)?;
    let b = random_connection(&mut rng, cfg.n, cfg.direction_scale)?;
    let d = holonomy_derivatives(&base, &a, &b)?;
    let f = |s: f64, t: f64| -> Result<_, HolError> { Ok(holonomy(&base.add_scaled(&a, s)?.add_scaled(&b, t)?)) };
    let h = cfg.fd_first;
    let fd = (f(h, 0.0)?.matrix() - f(-h, 0.0)?.matrix()) / C64::new(2.0 * h, 0.0);
    let h = cfg.fd_second;
    let tr = |s, t| f(s, t).map(|m| m.trace());
    let mixed = (tr(h, h)? - tr(h, -h)? - tr(-h, h)? + tr(-h, -h)?) / C64::new(4.0 * h * h, 0.0);
    Ok(DerivativeTrial { first_error: fro(&(fd - d.first)), second_error: (mixed - d.second_tr).norm() })
}

/// Compare the derivative formulas with finite differences on random connections.
pub fn derivative_check(cfg: &DerivativeCheckConfig) -> Result<DerivativeReport, HolError> {
    let trials: Vec<DerivativeTrial> =
        (0..cfg.trials).into_par_iter().map(|k| derivative_trial(cfg, k)).collect::<Result<_, _>>()?;
    let max_first_error = trials.iter().map(|t| t.first_error).fold(0.0, f64::max);
    let max_second_error = trials.iter().map(|t| t.second_error).fold(0.0, f64::max);
    Ok(DerivativeReport {
        ok: max_first_error <= cfg.tol_first && max_second_error <= cfg.tol_second,
        config: cfg.clone(),
        trials,
        max_first_error,
        max_second_error,
    })
}

fn random_hperp<R: Rng + ?Sized>(rng: &mut R) -> HperpVector {
    let mut c = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    HperpVector::new(c(), c())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub checks: Vec<CaseCheck>,
    pub max_error: f64,
    pub tol: f64,
    pub ok: bool,
}

/// Check every Hessian case on `per_case` random inputs with `x` in the su(2)
/// block; the three-segment case uses the subspace `xi_j = zeta_i = 0`.
pub fn closed_form_check(seed: u64, per_case: usize, n_per_segment: usize, tol: f64) -> Result<ClosedFormReport, HolError> {
    let jobs: Vec<(usize, HessianCase)> =
        HessianCase::ALL.iter().enumerate().flat_map(|(i, c)| (0..per_case).map(move |k| (i * per_case + k, *c))).collect();
    let checks: Vec<CaseCheck> = jobs
        .into_par_iter()
        .map(|(k, case)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let c = random_lie(&mut rng, 1.0).coords();
            let x = LieAlg3::from_coords(&[c[0], c[1], c[2], 0.0, 0.0, 0.0, 0.0, 0.0]);
            let x0 = random_lie(&mut rng, 1.0);
            let (xi, mut zi, mut xj, zj) =
                (random_hperp(&mut rng), random_hperp(&mut rng), random_hperp(&mut rng), random_hperp(&mut rng));
            if case == HessianCase::LoopGammaIGammaJ {
                xj = HperpVector::zero();
                zi = HperpVector::zero();
            }
            verify_closed_form(case, &x, &x0, &xi, &zi, &xj, &zj, n_per_segment)
        })
        .collect::<Result<_, _>>()?;
    let max_error = checks.iter().map(|c| c.error).fold(0.0, f64::max);
    Ok(ClosedFormReport { ok: max_error <= tol, checks, max_error, tol })
}
