mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use su3casson::presentation::{parse_presentation, Word};
use su3casson::repvariety::*;
use su3casson::su3::random::{random_su2_in_su3, random_su3};
use su3casson::su3::{fro, CMat3, UnitaryMatrix3};
use su3casson::C64;
use std::f64::consts::PI;

/// Irreducible SU(2) classes of <s,t | (st)^2 = s^3 = t^5> by rotation numbers.
///
/// The central element s^3 maps to eps = +-1. Rotation angles in (0, pi) must
/// satisfy 3 a, 5 b, 2 c = 0 or pi (mod 2 pi) according to eps, and a pair
/// with angles (a, b, c) exists and is irreducible iff the strict spherical
/// triangle inequalities hold.
fn sigma235_oracle() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for eps in [0.0, PI] {
        let angles = |k: u32| -> Vec<f64> {
            (0..2 * k)
                .map(|m| (eps + 2.0 * PI * m as f64) / k as f64)
                .filter(|a| *a > 1e-9 && *a < PI - 1e-9)
                .collect()
        };
        for &a in &angles(3) {
            for &b in &angles(5) {
                for &c in &angles(2) {
                    if (a - b).abs() < c && c < (a + b).min(2.0 * PI - a - b) {
                        out.push((a, b, c));
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup_by(|x, y| (x.0 - y.0).abs() + (x.1 - y.1).abs() + (x.2 - y.2).abs() < 1e-9);
    out
}

#[test]
fn oracle_counts_two() {
    assert_eq!(sigma235_oracle().len(), 2);
}

#[test]
fn sigma235_solver_finds_oracle_classes() {
    let p = common::sigma235();
    let cfg = SolverConfig { seed: 7, starts: 64, ..Default::default() };
    let out = solve_representations(&p, GroupKind::Su2InSu3, &cfg);
    let classes = deduplicate(&out.representations, 1e-6, 3);
    let irr: Vec<_> = classes
        .iter()
        .filter(|c| classify_stabilizer(&c.representative, 1e-8).unwrap().class.tag == StabilizerTag::ReducibleU1)
        .collect();
    assert_eq!(classes.len(), 3);
    assert_eq!(irr.len(), 2);
    let mut got: Vec<(f64, f64, f64)> = irr
        .iter()
        .map(|c| {
            let r = &c.representative;
            // The SU(2) trace of a block image is tr - 1.
            let ang = |w: &Word| ((r.word_holonomy(w).trace().re - 1.0) / 2.0).clamp(-1.0, 1.0).acos();
            (ang(&Word::generator(0)), ang(&Word::generator(1)), ang(&Word::from_pairs(&[(0, 1), (1, 1)])))
        })
        .collect();
    got.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for (g, o) in got.iter().zip(sigma235_oracle()) {
        assert!((g.0 - o.0).abs() < 1e-6 && (g.1 - o.1).abs() < 1e-6 && (g.2 - o.2).abs() < 1e-6, "{g:?} vs {o:?}");
    }
    // No nontrivial abelian representations of a homology sphere group.
    for c in &classes {
        let tag = classify_stabilizer(&c.representative, 1e-8).unwrap().class.tag;
        assert!(tag != StabilizerTag::AbelianLarge);
    }
}

#[test]
fn solver_is_deterministic() {
    let p = common::sigma235();
    let cfg = SolverConfig { seed: 3, starts: 16, ..Default::default() };
    let a = solve_representations(&p, GroupKind::Su2InSu3, &cfg);
    let b = solve_representations(&p, GroupKind::Su2InSu3, &cfg);
    assert_eq!(serde_json::to_string(&a.representations).unwrap(), serde_json::to_string(&b.representations).unwrap());
    assert_eq!(a.dropped, b.dropped);
}

#[test]
fn trivial_group_has_only_trivial_class() {
    let p = parse_presentation("<a | a>").unwrap();
    for g in [GroupKind::Su2InSu3, GroupKind::Su3] {
        let out = solve_representations(&p, g, &SolverConfig { starts: 8, ..Default::default() });
        assert!(out.representations[0].images()[0].distance(&UnitaryMatrix3::identity()) < 1e-10);
        assert_eq!(deduplicate(&out.representations, 1e-6, 3).len(), 1);
    }
}

#[test]
fn su3_solver_on_sigma235_contains_trivial() {
    let p = common::sigma235();
    let out = solve_representations(&p, GroupKind::Su3, &SolverConfig { seed: 1, starts: 8, ..Default::default() });
    assert!(out.representations.iter().any(|r| r.images().iter().all(|m| m.distance(&UnitaryMatrix3::identity()) < 1e-8)));
    for r in &out.representations {
        assert!(r.residual() <= 1e-10);
    }
}

#[test]
fn residual_examples() {
    let p = parse_presentation(common::TREFOIL).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = random_su3(&mut rng);
    let rho = Representation::new(p.clone(), GroupKind::Su3, vec![m, m]).unwrap();
    assert!(rho.residual() < 1e-12);
    let (x, y) = (random_su3(&mut rng), random_su3(&mut rng));
    let rho = Representation::new(p, GroupKind::Su3, vec![x, y]).unwrap();
    let (xm, ym) = (x.matrix(), y.matrix());
    let direct = xm * ym * xm * ym.adjoint() * xm.adjoint() * ym.adjoint() - CMat3::identity();
    assert!((rho.residual() - fro(&direct)).abs() < 1e-12);
    assert!(rho.residual() > 0.0);
    assert_eq!(Representation::trivial(common::sigma235(), GroupKind::Su3).residual(), 0.0);
}

#[test]
fn su2_block_form_is_enforced() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = parse_presentation("<x | >").unwrap();
    assert!(matches!(
        Representation::new(p, GroupKind::Su2InSu3, vec![random_su3(&mut rng)]),
        Err(RepError::NotSu2Block(0))
    ));
}

#[test]
fn word_holonomy_matches_fold() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let p = parse_presentation("<a, b | >").unwrap();
    let imgs = vec![random_su3(&mut rng), random_su3(&mut rng)];
    let rho = Representation::new(p, GroupKind::Su3, imgs.clone()).unwrap();
    let w = Word::from_pairs(&[(0, 1), (1, -1), (1, -1), (0, 1), (1, 1)]);
    let want = w.letters().iter().fold(CMat3::identity(), |acc, l| {
        let g = imgs[l.generator].matrix();
        acc * if l.exponent > 0 { *g } else { g.try_inverse().unwrap() }
    });
    assert!(fro(&(rho.word_holonomy(&w).matrix() - want)) < 1e-12);
    assert!(rho.word_holonomy(&Word::empty()).distance(&UnitaryMatrix3::identity()) == 0.0);
    assert!(rho.word_holonomy(&Word::new([w.letters(), w.invert().letters()].concat())).distance(&UnitaryMatrix3::identity()) < 1e-12);
}

#[test]
fn classify_examples() {
    let triv = Representation::trivial(common::sigma235(), GroupKind::Su3);
    let c = classify_stabilizer(&triv, 1e-8).unwrap();
    assert_eq!(c.class, StabilizerClass { tag: StabilizerTag::Central, commutant_dim: 8 });

    let rho = common::sigma235_rep(1);
    let c = classify_stabilizer(&rho, 1e-8).unwrap();
    assert_eq!(c.class, StabilizerClass { tag: StabilizerTag::ReducibleU1, commutant_dim: 1 });
    assert!(!c.flagged);
    let u = c.u1_generator.unwrap();
    for m in rho.images() {
        assert!(fro(&(m.conjugate(u.matrix()) - u.matrix())) < 1e-10);
    }
    assert!(c.frame.unwrap().fits(rho.images()));

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = parse_presentation("<x, y | >").unwrap();
    let rho = Representation::new(p.clone(), GroupKind::Su3, vec![random_su3(&mut rng), random_su3(&mut rng)]).unwrap();
    let c = classify_stabilizer(&rho, 1e-8).unwrap();
    assert_eq!(c.class, StabilizerClass { tag: StabilizerTag::Irreducible, commutant_dim: 0 });

    let l = C64::from_polar(1.0, 1.0);
    let d = UnitaryMatrix3::diag(l, l, l.inv() * l.inv()).unwrap();
    let rho = Representation::new(p.clone(), GroupKind::Su3, vec![d, d]).unwrap();
    assert_eq!(classify_stabilizer(&rho, 1e-8).unwrap().class.commutant_dim, 4);
    let t = UnitaryMatrix3::diag(l, C64::from_polar(1.0, 2.0_f64.sqrt()), (l * C64::from_polar(1.0, 2.0_f64.sqrt())).inv()).unwrap();
    let rho = Representation::new(p, GroupKind::Su3, vec![t, d]).unwrap();
    let c = classify_stabilizer(&rho, 1e-8).unwrap();
    assert_eq!(c.class, StabilizerClass { tag: StabilizerTag::AbelianLarge, commutant_dim: 2 });
    assert!(c.flagged);
}

#[test]
fn classify_rejects_large_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = parse_presentation(common::TREFOIL).unwrap();
    let rho = Representation::new(p, GroupKind::Su3, vec![random_su3(&mut rng), random_su3(&mut rng)]).unwrap();
    assert!(matches!(classify_stabilizer(&rho, 1e-8), Err(RepError::ResidualTooLarge { .. })));
}

#[test]
fn complex_conjugate_rep_is_a_different_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = parse_presentation("<x, y | >").unwrap();
    let (x, y) = (random_su3(&mut rng), random_su3(&mut rng));
    let rho = Representation::new(p.clone(), GroupKind::Su3, vec![x, y]).unwrap();
    let conj = |m: &UnitaryMatrix3| UnitaryMatrix3::new(m.matrix().map(|z| z.conj())).unwrap();
    let bar = Representation::new(p, GroupKind::Su3, vec![conj(&x), conj(&y)]).unwrap();
    assert!(fingerprint_distance(&fingerprint(&rho, 3), &fingerprint(&bar, 3)) > 1e-3);
    assert_eq!(deduplicate(&[rho.clone(), bar], 1e-6, 3).len(), 2);
    assert_eq!(deduplicate(&[rho], 1e-6, 3).len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dedup_invariant_under_conjugation(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reps = [common::sigma235_rep(1), common::sigma235_rep(3)];
        let moved: Vec<Representation> = reps.iter().map(|r| r.conjugated(&random_su3(&mut rng))).collect();
        let all: Vec<Representation> = reps.iter().cloned().chain(moved).collect();
        prop_assert_eq!(deduplicate(&all, 1e-6, 3).len(), 2);
    }

    #[test]
    fn commutant_dim_is_conjugation_invariant(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = parse_presentation("<x, y | >").unwrap();
        let rho = Representation::new(p, GroupKind::Su2InSu3, vec![random_su2_in_su3(&mut rng), random_su2_in_su3(&mut rng)]).unwrap();
        let g = random_su3(&mut rng);
        let a = classify_stabilizer(&rho, 1e-8).unwrap().class;
        let b = classify_stabilizer(&rho.conjugated(&g), 1e-8).unwrap().class;
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.commutant_dim, 1);
    }
}
