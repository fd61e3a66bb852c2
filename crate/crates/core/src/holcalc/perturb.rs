use super::{holonomy, holonomy_derivatives, LoopConnection};
use crate::C64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Real polynomial of degree at most 3 in `(Re tr, Im tr)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePolynomial {
    /// Terms `c x^i y^j` as `(i, j, c)` with `i + j <= 3`.
    pub terms: Vec<(u32, u32, f64)>,
}

impl TracePolynomial {
    pub fn new(terms: Vec<(u32, u32, f64)>) -> Self {
        assert!(terms.iter().all(|(i, j, _)| i + j <= 3), "degree at most 3");
        Self { terms }
    }

    /// `tau = Re tr`.
    pub fn re_trace() -> Self {
        Self::new(vec![(1, 0, 1.0)])
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![(0, 0, c)])
    }

    pub fn eval(&self, t: C64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * t.re.powi(i as i32) * t.im.powi(j as i32)).sum()
    }

    /// `(d tau / d Re tr, d tau / d Im tr)`.
    pub fn grad(&self, t: C64) -> (f64, f64) {
        let mut g = (0.0, 0.0);
        for &(i, j, c) in &self.terms {
            if i > 0 {
                g.0 += c * i as f64 * t.re.powi(i as i32 - 1) * t.im.powi(j as i32);
            }
            if j > 0 {
                g.1 += c * j as f64 * t.re.powi(i as i32) * t.im.powi(j as i32 - 1);
            }
        }
        g
    }

    /// Sum of absolute coefficients, the size proxy for the C^3 norm.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.2.abs()).sum()
    }

    /// Bound on `|d tau|` per unit change of the trace over `|Re tr|, |Im tr| <= 3`.
    pub fn derivative_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(i, j, c)| {
                let d = (i + j) as f64;
                if d == 0.0 {
                    0.0
                } else {
                    c.abs() * d * 3f64.powi(i as i32 + j as i32 - 1)
                }
            })
            .sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.terms.iter().map(|&(i, j, c)| (i, j, c * s)).collect())
    }
}

/// Quadrature of the unit disk with a radial bump of total mass 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaProfile {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl EtaProfile {
    /// Quartic bump `(1 - (r/0.9)^2)^2` on a polar midpoint grid, zero for `r >= 0.9`.
    pub fn quartic(nr: usize, ntheta: usize) -> Self {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let dr = 1.0 / nr as f64;
        let dt = 2.0 * PI / ntheta as f64;
        for i in 0..nr {
            let r = (i as f64 + 0.5) * dr;
            let eta = if r < 0.9 { (1.0 - (r / 0.9).powi(2)).powi(2) } else { 0.0 };
            for j in 0..ntheta {
                let t = j as f64 * dt;
                points.push([r * t.cos(), r * t.sin()]);
                weights.push(eta * r * dr * dt);
            }
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self { points, weights }
    }

    /// The default 32 x 32 grid.
    pub fn standard() -> Self {
        Self::quartic(32, 32)
    }

    /// Quadrature nodes with nonzero weight.
    pub fn support(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied()).filter(|(_, w)| *w > 0.0)
    }
}

/// Perturbation `p(A) = int_{D^2} tau(tr hol(A_x)) eta(x) dx`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub tau: TracePolynomial,
    pub eta: EtaProfile,
}

/// Value of the perturbation on a family `x -> A_x` of loop connections.
pub fn perturbation_value<F: Fn([f64; 2]) -> LoopConnection>(spec: &PerturbationSpec, family: F) -> f64 {
    spec.eta.support().map(|(x, w)| w * spec.tau.eval(holonomy(&family(x)).trace())).sum()
}

/// Directional derivative `Dp(A)(a)` for tangent families `x -> a_x`.
pub fn perturbation_derivative<F, G>(spec: &PerturbationSpec, family: F, tangent: G) -> f64
where
    F: Fn([f64; 2]) -> LoopConnection,
    G: Fn([f64; 2]) -> LoopConnection,
{
    spec.eta
        .support()
        .map(|(x, w)| {
            let base = family(x);
            let a = tangent(x);
            let d = holonomy_derivatives(&base, &a, &a).expect("matching grids");
            let dt = d.first.trace();
            let (gx, gy) = spec.tau.grad(d.holonomy.trace());
            w * (gx * dt.re + gy * dt.im)
        })
        .sum()
}

/// Result of [`perturbation_gradient_norm_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientNormReport {
    /// Largest `|Dp(A)(a)| / |a|` over the samples.
    pub sup_ratio: f64,
    /// A priori constant `sqrt 3 * derivative_bound(tau)`.
    pub bound: f64,
    pub coefficient_norm: f64,
    pub samples: usize,
}

/// Estimate `sup |Dp(A)(a)| / |a|` over random base families and random
/// tangents. The tangent norm is the largest L^2 norm over the loops in the
/// support of `eta`.
pub fn perturbation_gradient_norm_check<R, F, G>(
    spec: &PerturbationSpec,
    bases: &[F],
    random_tangent: G,
    trials: usize,
    rng: &mut R,
) -> GradientNormReport
where
    R: Rng + ?Sized,
    F: Fn([f64; 2]) -> LoopConnection,
    G: Fn(&mut R) -> Box<dyn Fn([f64; 2]) -> LoopConnection>,
{
    let mut sup = 0.0f64;
    let mut samples = 0;
    for base in bases {
        for _ in 0..trials {
            let t = random_tangent(rng);
            let norm = spec.eta.support().map(|(x, _)| t(x).l2_norm()).fold(0.0, f64::max);
            if norm == 0.0 {
                continue;
            }
            let d = perturbation_derivative(spec, base, &t);
            sup = sup.max(d.abs() / norm);
            samples += 1;
        }
    }
    GradientNormReport {
        sup_ratio: sup,
        bound: 3f64.sqrt() * spec.tau.derivative_bound(),
        coefficient_norm: spec.tau.coefficient_norm(),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_weights_sum_to_one_and_vanish_near_boundary() {
        let e = EtaProfile::standard();
        assert!((e.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        for (p, w) in e.points.iter().zip(&e.weights) {
            if (p[0] * p[0] + p[1] * p[1]).sqrt() >= 0.9 {
                assert_eq!(*w, 0.0);
            }
        }
    }

    #[test]
    fn polynomial_gradient() {
        let t = TracePolynomial::new(vec![(2, 1, 1.5), (0, 1, -2.0)]);
        let z = C64::new(0.7, -0.3);
        let h = 1e-6;
        let (gx, gy) = t.grad(z);
        assert!((gx - (t.eval(z + h) - t.eval(z - h)) / (2.0 * h)).abs() < 1e-8);
        let ih = C64::new(0.0, h);
        assert!((gy - (t.eval(z + ih) - t.eval(z - ih)) / (2.0 * h)).abs() < 1e-8);
    }
}
