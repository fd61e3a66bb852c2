mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use su3casson::holcalc::*;
use su3casson::su3::random::{random_lie, random_su3};
use su3casson::su3::{fro, HperpVector, LieAlg3, UnitaryMatrix3};
use su3casson::C64;
use std::f64::consts::PI;

/// Random trigonometric polynomial of degree 3 with su(3) coefficients.
fn random_smooth(rng: &mut ChaCha8Rng, scale: f64) -> impl Fn(f64) -> LieAlg3 {
    let c: Vec<(LieAlg3, LieAlg3)> =
        (0..4).map(|m| (random_lie(rng, scale / (1.0 + m as f64).powi(2)), random_lie(rng, scale / (1.0 + m as f64).powi(2)))).collect();
    move |u| {
        c.iter().enumerate().fold(LieAlg3::zero(), |acc, (m, (a, b))| {
            let t = 2.0 * PI * m as f64 * u;
            acc + *a * t.cos() + *b * t.sin()
        })
    }
}

fn random_loop(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> LoopConnection {
    LoopConnection::from_fn(n, random_smooth(rng, scale)).unwrap()
}

#[test]
fn zero_connection_has_trivial_transport() {
    let a = LoopConnection::zero(64).unwrap();
    assert_eq!(holonomy(&a), UnitaryMatrix3::identity());
    assert!(parallel_transport(&a, 0.37).distance(&UnitaryMatrix3::identity()) < 1e-15);
}

#[test]
fn constant_connection_exponentiates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xi = random_lie(&mut rng, 1.0);
    let a = LoopConnection::from_fn(64, |_| xi).unwrap();
    assert!(holonomy(&a).distance(&(-xi).exp()) < 1e-10);
    assert!(parallel_transport(&a, 0.3).distance(&(xi * -0.3).exp()) < 1e-10);
}

#[test]
fn step_halving_converges() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let f = random_smooth(&mut rng, 1.0);
        let h256 = holonomy(&LoopConnection::from_fn(256, &f).unwrap());
        let h512 = holonomy(&LoopConnection::from_fn(512, &f).unwrap());
        let h1024 = holonomy(&LoopConnection::from_fn(1024, &f).unwrap());
        let d = h256.distance(&h512);
        assert!(d < 1e-8, "{d}");
        // Richardson extrapolation of a fourth-order scheme.
        let rich = (h1024.matrix() * C64::new(16.0, 0.0) - h512.matrix()) / C64::new(15.0, 0.0);
        assert!(fro(&(h256.matrix() - rich)) < 1e-8);
    }
}

#[test]
fn first_derivative_of_constant_direction() {
    // hol(t xi) = exp(-t xi), so the derivative at the zero connection is -xi.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xi = random_lie(&mut rng, 1.0);
    let zero = LoopConnection::zero(64).unwrap();
    let a = LoopConnection::from_fn(64, |_| xi).unwrap();
    let d = holonomy_derivatives(&zero, &a, &a).unwrap();
    assert!(fro(&(d.first + xi.matrix())) < 1e-12);
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let base = random_loop(&mut rng, 256, 1.0);
        let a = random_loop(&mut rng, 256, 0.5);
        let b = random_loop(&mut rng, 256, 0.5);
        let d = holonomy_derivatives(&base, &a, &b).unwrap();
        let f = |s: f64, t: f64| holonomy(&base.add_scaled(&a, s).unwrap().add_scaled(&b, t).unwrap());
        let h = 1e-4;
        let fd = (f(h, 0.0).matrix() - f(-h, 0.0).matrix()) / C64::new(2.0 * h, 0.0);
        assert!(fro(&(fd - d.first)) < 1e-6);
        let h = 1e-3;
        let tr = |s, t| f(s, t).trace();
        let mixed = (tr(h, h) - tr(h, -h) - tr(-h, h) + tr(-h, -h)) / C64::new(4.0 * h * h, 0.0);
        assert!((mixed - d.second_tr).norm() < 1e-5, "{mixed} vs {}", d.second_tr);
    }
}

#[test]
fn grid_mismatch_is_an_error() {
    let a = LoopConnection::zero(64).unwrap();
    let b = LoopConnection::zero(32).unwrap();
    assert_eq!(holonomy_derivatives(&a, &b, &a).unwrap_err(), HolError::GridMismatch(64, 32));
}

#[test]
fn perturbation_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let xi = random_lie(&mut rng, 1.0);
    let spec = PerturbationSpec { tau: TracePolynomial::re_trace(), eta: EtaProfile::standard() };
    // Every loop has the same holonomy exp(-xi) after conjugation.
    let g = random_su3(&mut rng);
    let fam = |x: [f64; 2]| {
        let gx = (LieAlg3::from_coords(&[x[0], x[1], 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])).exp() * g;
        LoopConnection::from_fn(32, |_| xi).unwrap().conjugated(&gx)
    };
    let want = (-xi).exp().trace().re;
    assert!((perturbation_value(&spec, fam) - want).abs() < 1e-9);
    let one = PerturbationSpec { tau: TracePolynomial::constant(1.0), eta: EtaProfile::standard() };
    assert!((perturbation_value(&one, |_| random_loop(&mut ChaCha8Rng::seed_from_u64(9), 32, 1.0)) - 1.0).abs() < 1e-12);
}

#[test]
fn perturbation_derivative_matches_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tau = TracePolynomial::new(vec![(1, 0, 0.7), (2, 1, -0.2), (0, 2, 0.5), (3, 0, 0.1)]);
    let spec = PerturbationSpec { tau, eta: EtaProfile::quartic(6, 6) };
    let f0 = random_smooth(&mut rng, 1.0);
    let f1 = random_smooth(&mut rng, 1.0);
    let t0 = random_smooth(&mut rng, 1.0);
    let family = |x: [f64; 2]| LoopConnection::from_fn(256, |u| f0(u) + f1(u) * x[0] + f1(u) * (0.5 * x[1])).unwrap();
    let tangent = |x: [f64; 2]| LoopConnection::from_fn(256, |u| t0(u) * (1.0 + x[0] * x[1])).unwrap();
    let d = perturbation_derivative(&spec, family, tangent);
    let h = 1e-4;
    let shifted = |t: f64| perturbation_value(&spec, |x| family(x).add_scaled(&tangent(x), t).unwrap());
    let fd = (shifted(h) - shifted(-h)) / (2.0 * h);
    assert!((d - fd).abs() < 1e-6, "{d} vs {fd}");
}

#[test]
fn perturbation_bound_is_finite_and_scales() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tau = TracePolynomial::new(vec![(1, 0, 1.0), (1, 1, 0.3), (0, 3, -0.05)]);
    let bases: Vec<_> = (0..4)
        .map(|_| {
            let f = random_smooth(&mut rng, 1.0);
            move |x: [f64; 2]| LoopConnection::from_fn(32, |u| f(u) * (1.0 + 0.2 * x[0])).unwrap()
        })
        .collect();
    let tangent = |r: &mut ChaCha8Rng| -> Box<dyn Fn([f64; 2]) -> LoopConnection> {
        let f = random_smooth(r, 1.0);
        Box::new(move |_x| LoopConnection::from_fn(32, &f).unwrap())
    };
    let eta = EtaProfile::quartic(4, 4);
    let small = PerturbationSpec { tau: tau.clone(), eta: eta.clone() };
    let big = PerturbationSpec { tau: tau.scaled(3.0), eta };
    let r1 = perturbation_gradient_norm_check(&small, &bases, tangent, 5, &mut ChaCha8Rng::seed_from_u64(8));
    let r3 = perturbation_gradient_norm_check(&big, &bases, tangent, 5, &mut ChaCha8Rng::seed_from_u64(8));
    assert!(r1.sup_ratio.is_finite() && r1.sup_ratio <= r1.bound);
    assert!(r3.sup_ratio <= r3.bound);
    assert!((r3.sup_ratio - 3.0 * r1.sup_ratio).abs() < 1e-9 * r3.sup_ratio);
    assert!(r3.coefficient_norm > r1.coefficient_norm);
}

fn random_hperp(rng: &mut ChaCha8Rng) -> HperpVector {
    HperpVector::new(C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_su2_generator(rng: &mut ChaCha8Rng) -> LieAlg3 {
    let c = random_lie(rng, 1.0).coords();
    LieAlg3::from_coords(&[c[0], c[1], c[2], 0.0, 0.0, 0.0, 0.0, 0.0])
}

#[test]
fn closed_form_examples() {
    let one = HperpVector::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let two = HperpVector::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let z = HperpVector::zero();
    let i = UnitaryMatrix3::identity();
    let v = hessian_closed_form(HessianCase::GammaGamma, &i, &one, &one, &z, &z).unwrap();
    assert!((v - C64::new(-4.0, 0.0)).norm() < 1e-15);
    let v = hessian_closed_form(HessianCase::GammaGamma, &i, &one, &two, &z, &z).unwrap();
    assert!(v.norm() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let (x, y) = (random_hperp(&mut rng), random_hperp(&mut rng));
        let gg = hessian_closed_form(HessianCase::GammaGamma, &i, &x, &y, &z, &z).unwrap();
        let lg = hessian_closed_form(HessianCase::LoopGamma, &i, &x, &y, &z, &z).unwrap();
        assert!((gg - lg).norm() < 1e-12);
        assert!(gg.im.abs() < 1e-12);
    }
    let bad = random_su3(&mut rng);
    assert!(hessian_closed_form(HessianCase::LoopGamma, &bad, &one, &one, &z, &z).is_err());
}

#[test]
fn closed_forms_match_synthesized_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in HessianCase::ALL {
        for _ in 0..3 {
            let x = random_su2_generator(&mut rng);
            let x0 = random_lie(&mut rng, 1.0);
            let (xi, mut zi, mut xj, zj) = (random_hperp(&mut rng), random_hperp(&mut rng), random_hperp(&mut rng), random_hperp(&mut rng));
            if case == HessianCase::LoopGammaIGammaJ {
                xj = HperpVector::zero();
                zi = HperpVector::zero();
            }
            let c = verify_closed_form(case, &x, &x0, &xi, &zi, &xj, &zj, 128).unwrap();
            assert!(c.error < 1e-6, "{case:?}: {:?} vs {:?}", c.closed_form, c.numeric);
        }
    }
}

#[test]
fn loop_segment_holonomy_is_l() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let x = random_su2_generator(&mut rng);
    let x0 = random_lie(&mut rng, 1.0);
    let z = LieAlg3::zero();
    let syn = synthesize(&[Segment::Holonomy { x }, Segment::Gamma { xi: z, zeta: z }], &x0, 128).unwrap();
    let err = holonomy(&syn.base).distance(&x.exp().inverse());
    assert!(err < 1e-7, "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_of_holonomy_is_gauge_invariant(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_loop(&mut rng, 64, 1.0);
        let g = random_su3(&mut rng);
        prop_assert!((holonomy(&a).trace() - holonomy(&a.conjugated(&g)).trace()).norm() < 1e-10);
    }

    #[test]
    fn second_derivative_is_symmetric(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_loop(&mut rng, 64, 1.0);
        let a = random_loop(&mut rng, 64, 1.0);
        let b = random_loop(&mut rng, 64, 1.0);
        let ab = holonomy_derivatives(&base, &a, &b).unwrap().second_tr;
        let ba = holonomy_derivatives(&base, &b, &a).unwrap().second_tr;
        prop_assert!((ab - ba).norm() < 1e-10);
    }

    #[test]
    fn gamma_gamma_form_is_real(v in proptest::array::uniform4(-2.0..2.0f64), w in proptest::array::uniform4(-2.0..2.0f64)) {
        let z = HperpVector::zero();
        let r = hessian_closed_form(HessianCase::GammaGamma, &UnitaryMatrix3::identity(), &HperpVector::from_real(&v), &HperpVector::from_real(&w), &z, &z).unwrap();
        prop_assert!(r.im.abs() < 1e-12);
    }
}

#[test]
fn derivative_suite_passes() {
    let cfg = DerivativeCheckConfig { seed: 12, trials: 8, ..Default::default() };
    let r = derivative_check(&cfg).unwrap();
    assert!(r.ok, "{} {}", r.max_first_error, r.max_second_error);
    assert_eq!(r.trials.len(), 8);
    assert_eq!(derivative_check(&cfg).unwrap(), r);
}

#[test]
fn closed_form_suite_passes() {
    let r = closed_form_check(13, 1, 128, 1e-6).unwrap();
    assert_eq!(r.checks.len(), 5);
    assert!(r.ok, "{}", r.max_error);
}
