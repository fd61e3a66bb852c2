use super::{deduplicate, fingerprint, GroupKind, Representation};
use crate::presentation::GroupPresentation;
use crate::su3::{random::random_lie, su3_basis, CMat3, LieAlg3, UnitaryMatrix3};
use crate::C64;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Settings for [`solve_representations`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    pub starts: usize,
    pub max_iter: usize,
    pub tol_residual: f64,
    /// Standard deviation of the Lie algebra coordinates of random starts.
    pub start_scale: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { seed: 0, starts: 256, max_iter: 200, tol_residual: 1e-10, start_scale: 1.5 }
    }
}

/// Converged solutions (sorted by residual, then fingerprint) and the number
/// of starts that did not converge.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub representations: Vec<Representation>,
    pub dropped: usize,
}

impl SolveOutcome {
    /// Deduplicate into conjugacy classes.
    pub fn classes(&self, tol: f64, word_len: usize) -> Vec<super::ConjugacyClass> {
        deduplicate(&self.representations, tol, word_len)
    }
}

fn tangent_basis(group: GroupKind) -> Vec<CMat3> {
    let b = su3_basis();
    match group {
        GroupKind::Su2InSu3 => b[..3].to_vec(),
        GroupKind::Su3 => b.to_vec(),
    }
}

/// Multi-start search for representations with relator residual at most
/// `cfg.tol_residual`. Start 0 is the trivial representation.
pub fn solve_representations(p: &GroupPresentation, group: GroupKind, cfg: &SolverConfig) -> SolveOutcome {
    let starts = cfg.starts.max(1);
    let runs: Vec<Option<Representation>> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let init: Vec<UnitaryMatrix3> = if k == 0 {
                vec![UnitaryMatrix3::identity(); p.num_generators()]
            } else {
                (0..p.num_generators())
                    .map(|_| {
                        let x = random_lie(&mut rng, cfg.start_scale);
                        let x = match group {
                            GroupKind::Su2InSu3 => LieAlg3::from_coords(&[x.coords()[0], x.coords()[1], x.coords()[2], 0., 0., 0., 0., 0.]),
                            GroupKind::Su3 => x,
                        };
                        x.exp()
                    })
                    .collect()
            };
            let images = minimize(p, group, init, cfg);
            let rep = Representation::new(p.clone(), group, images).ok()?;
            (rep.residual() <= cfg.tol_residual).then_some(rep)
        })
        .collect();
    let dropped = runs.iter().filter(|r| r.is_none()).count();
    let mut reps: Vec<(Vec<C64>, Representation)> =
        runs.into_iter().flatten().map(|r| (fingerprint(&r, 2), r)).collect();
    reps.sort_by(|(fa, a), (fb, b)| {
        a.residual().total_cmp(&b.residual()).then_with(|| {
            fa.iter().zip(fb).map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    SolveOutcome { representations: reps.into_iter().map(|(_, r)| r).collect(), dropped }
}

struct Problem<'a> {
    p: &'a GroupPresentation,
    basis: Vec<CMat3>,
}

impl Problem<'_> {
    fn residual_vec(&self, g: &[UnitaryMatrix3]) -> DVector<f64> {
        let m = self.p.num_relators();
        let mut r = DVector::zeros(18 * m);
        for (i, rel) in self.p.relators().iter().enumerate() {
            let h = super::word_holonomy(g, rel).matrix() - CMat3::identity();
            for (k, z) in h.iter().enumerate() {
                r[18 * i + 2 * k] = z.re;
                r[18 * i + 2 * k + 1] = z.im;
            }
        }
        r
    }

    // Columns: derivative under g_j -> exp(eps e_k) g_j.
    fn jacobian(&self, g: &[UnitaryMatrix3]) -> DMatrix<f64> {
        let d = self.basis.len();
        let n = g.len();
        let m = self.p.num_relators();
        let mut jac = DMatrix::zeros(18 * m, n * d);
        for (i, rel) in self.p.relators().iter().enumerate() {
            let letters = rel.letters();
            let mats: Vec<CMat3> = letters
                .iter()
                .map(|l| if l.exponent > 0 { *g[l.generator].matrix() } else { g[l.generator].matrix().adjoint() })
                .collect();
            let len = mats.len();
            let mut pre = vec![CMat3::identity(); len + 1];
            for q in 0..len {
                pre[q + 1] = pre[q] * mats[q];
            }
            let mut suf = vec![CMat3::identity(); len + 1];
            for q in (0..len).rev() {
                suf[q] = mats[q] * suf[q + 1];
            }
            for (q, l) in letters.iter().enumerate() {
                for (k, e) in self.basis.iter().enumerate() {
                    let dm = if l.exponent > 0 { pre[q] * e * suf[q] } else { -(pre[q + 1] * e * suf[q + 1]) };
                    let col = l.generator * d + k;
                    for (t, z) in dm.iter().enumerate() {
                        jac[(18 * i + 2 * t, col)] += z.re;
                        jac[(18 * i + 2 * t + 1, col)] += z.im;
                    }
                }
            }
        }
        jac
    }

    fn step(&self, g: &[UnitaryMatrix3], delta: &DVector<f64>) -> Vec<UnitaryMatrix3> {
        let d = self.basis.len();
        g.iter()
            .enumerate()
            .map(|(j, gj)| {
                let mut x = CMat3::zeros();
                for (k, e) in self.basis.iter().enumerate() {
                    x += e * C64::new(delta[j * d + k], 0.0);
                }
                LieAlg3::new_unchecked(x).exp() * *gj
            })
            .collect()
    }
}

fn minimize(p: &GroupPresentation, group: GroupKind, mut g: Vec<UnitaryMatrix3>, cfg: &SolverConfig) -> Vec<UnitaryMatrix3> {
    if p.num_relators() == 0 {
        return g;
    }
    let prob = Problem { p, basis: tangent_basis(group) };
    let target = (cfg.tol_residual * 1e-3).max(1e-15);
    let mut r = prob.residual_vec(&g);
    let mut cost = 0.5 * r.norm_squared();
    // Riemannian gradient descent with Armijo backtracking.
    for _ in 0..20 {
        let jac = prob.jacobian(&g);
        let grad = jac.transpose() * &r;
        let gn = grad.norm_squared();
        if gn < 1e-20 {
            break;
        }
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-6 {
            let cand = prob.step(&g, &(-&grad * t));
            let rc = prob.residual_vec(&cand);
            let cc = 0.5 * rc.norm_squared();
            if cc <= cost - 1e-4 * t * gn {
                g = cand;
                r = rc;
                cost = cc;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    // Levenberg-Marquardt polish.
    let mut mu = 1e-3;
    for _ in 0..cfg.max_iter {
        if r.amax() < target {
            break;
        }
        let jac = prob.jacobian(&g);
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let grad = &jt * &r;
        let scale = jtj.diagonal().max().max(1.0);
        let mut accepted = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += mu * scale;
            }
            let Some(delta) = a.cholesky().map(|c| c.solve(&(-&grad))) else {
                mu *= 10.0;
                continue;
            };
            let cand = prob.step(&g, &delta);
            let rc = prob.residual_vec(&cand);
            let cc = 0.5 * rc.norm_squared();
            if cc < cost {
                g = cand;
                r = rc;
                cost = cc;
                mu = (mu / 5.0).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 8.0;
        }
        if !accepted {
            break;
        }
    }
    g.into_iter().map(|m| m.renormalized()).collect()
}
