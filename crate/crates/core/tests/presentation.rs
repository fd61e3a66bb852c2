mod common;

use proptest::prelude::*;
use su3casson::foxcoh::{cochain_matrices, evaluate_group_ring, CoefficientModule, ModuleTag};
use su3casson::presentation::*;
use su3casson::repvariety::{GroupKind, Representation};
use su3casson::su3::{fro, random::random_su2, LieAlg3, UnitaryMatrix3};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn w(p: &[(usize, i32)]) -> Word {
    Word::from_pairs(p)
}

#[test]
fn binary_icosahedral_expands_by_hand() {
    let p = parse_presentation(common::SIGMA235).unwrap();
    assert_eq!(p.num_relators(), 2);
    // (st)^2 s^-3 = s t s t s^-1 s^-1 s^-1 reduces to s t s t^... : t s^-1 stays, s s^-1 cancels once.
    let r1 = w(&[(0, 1), (1, 1), (0, 1), (1, 1), (0, -1), (0, -1), (0, -1)]).reduce();
    let r2 = w(&[(0, 1), (0, 1), (0, 1), (1, -1), (1, -1), (1, -1), (1, -1), (1, -1)]);
    assert_eq!(p.relators()[0], r1);
    assert_eq!(p.relators()[1], r2);
    assert_eq!(r1.len(), 7);
    assert!(p.is_homology_sphere());
}

#[test]
fn trefoil_is_not_a_homology_sphere() {
    let p = parse_presentation(common::TREFOIL).unwrap();
    assert_eq!(p.relators()[0].len(), 6);
    assert_eq!(p.abelianization(), Abelianization { free_rank: 1, torsion: vec![] });
    assert!(!p.is_homology_sphere());
}

#[test]
fn text_and_json_round_trip() {
    for t in [common::SIGMA235, common::TREFOIL, "<a | a>", "<x, y | >", "<a,b,c | a*b*c; (a*b)^-2 = c^3>"] {
        let p = parse_presentation(t).unwrap();
        assert_eq!(parse_presentation(&p.to_text()).unwrap(), p);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<GroupPresentation>(&json).unwrap(), p);
    }
    let json = serde_json::to_value(parse_presentation("<a | a>").unwrap()).unwrap();
    assert_eq!(json, serde_json::json!({"generators": ["a"], "relators": [[[0, 1]]]}));
}

#[test]
fn json_with_bad_index_is_rejected() {
    let bad = r#"{"generators": ["a"], "relators": [[[1, 1]]]}"#;
    assert!(serde_json::from_str::<GroupPresentation>(bad).is_err());
}

#[test]
fn group_ring_identity_and_central() {
    let p = parse_presentation("<x | >").unwrap();
    let omega = su3casson::C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let c = UnitaryMatrix3::diag(omega, omega, omega).unwrap();
    let rho = Representation::new(p, GroupKind::Su3, vec![c]).unwrap();
    let m = CoefficientModule::su3();
    let id = evaluate_group_ring(&GroupRingElement::word(&Word::empty()), &rho, &m).unwrap();
    assert!((id - DMatrix::identity(8, 8)).norm() < 1e-14);
    let cx = evaluate_group_ring(&GroupRingElement::word(&Word::generator(0)), &rho, &m).unwrap();
    assert!((cx - DMatrix::identity(8, 8)).norm() < 1e-12);
}

#[test]
fn cancelling_derivative_evaluates_to_zero() {
    let rho = common::trefoil_rep(1.2);
    let d = fox_derivative(&w(&[(0, 1), (0, -1)]), 0, 2).unwrap();
    let e = evaluate_group_ring(&d, &rho, &CoefficientModule::su3()).unwrap();
    assert_eq!(e.norm(), 0.0);
}

#[test]
fn trefoil_fox_block_matches_finite_difference() {
    let rho = common::trefoil_rep(1.2);
    assert!(rho.residual() < 1e-12, "residual {}", rho.residual());
    let info = su3casson::repvariety::classify_stabilizer(&rho, 1e-8).unwrap();
    let module = CoefficientModule::new(ModuleTag::HperpPart, info.frame).unwrap();
    let r = &rho.presentation().relators()[0];
    for j in 0..2 {
        let block = evaluate_group_ring(&fox_derivative(r, j, 2).unwrap(), &rho, &module).unwrap();
        for k in 0..4 {
            // Deform x_j -> exp(t v) x_j with v the k-th module basis vector.
            let mut e = vec![0.0; 4];
            e[k] = 1.0;
            let v = module.to_lie(&e);
            let h = 1e-5;
            let at = |t: f64| {
                let mut imgs = rho.images().to_vec();
                imgs[j] = (v * t).exp() * imgs[j];
                let rt = Representation::new(rho.presentation().clone(), GroupKind::Su3, imgs).unwrap();
                *rt.word_holonomy(r).matrix()
            };
            let d = (at(h) - at(-h)) / su3casson::C64::new(2.0 * h, 0.0);
            // d rho(r) = z(r) rho(r) with z(r) = sum_j (d r/d x_j) v_j.
            let zr = LieAlg3::new_unchecked(d * rho.word_holonomy(r).matrix().adjoint());
            let want = module.coords(&zr);
            for i in 0..4 {
                assert!((block[(i, k)] - want[i]).abs() < 1e-8, "j={j} k={k} i={i}");
            }
        }
    }
}

#[test]
fn coboundaries_are_annihilated() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let rho = common::sigma235_rep(1);
    let mats = cochain_matrices(&rho, &CoefficientModule::new(ModuleTag::Su2Adjoint, None).unwrap()).unwrap();
    let prod = &mats.cocycle * &mats.coboundary;
    assert!(prod.norm() < 1e-9 * mats.cocycle.norm() * mats.coboundary.norm());
    let _ = random_su2(&mut rng);
    let _ = fro;
}

fn arb_word(n: usize, max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((0..n, prop_oneof![Just(1i32), Just(-1i32)]), 0..=max).prop_map(|v| Word::from_pairs(&v))
}

proptest! {
    #[test]
    fn reduce_is_idempotent(u in arb_word(3, 20)) {
        let r = u.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r);
    }

    #[test]
    fn invert_concat_gives_empty(u in arb_word(3, 12)) {
        prop_assert!(u.concat(&u.invert()).is_empty());
    }

    #[test]
    fn fox_product_rule(u in arb_word(3, 12), v in arb_word(3, 12), j in 0usize..3) {
        let uv = Word::new(u.letters().iter().chain(v.letters()).copied().collect());
        let lhs = fox_derivative(&uv, j, 3).unwrap();
        let rhs = fox_derivative(&u, j, 3).unwrap().add(&fox_derivative(&v, j, 3).unwrap().left_mul(&u));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fox_derivative_respects_reduction(u in arb_word(2, 12), j in 0usize..2) {
        // Free reduction does not change the Fox derivative as a group-ring element.
        prop_assert_eq!(fox_derivative(&u, j, 2).unwrap(), fox_derivative(&u.reduce(), j, 2).unwrap());
    }

    #[test]
    fn fundamental_identity(u in arb_word(2, 10)) {
        // sum_j (d u / d x_j)(x_j - 1) = u - 1 in the group ring.
        let mut acc = GroupRingElement::from_terms([(-1, u.reduce()), (1, Word::empty())]);
        for j in 0..2 {
            let d = fox_derivative(&u, j, 2).unwrap();
            let shifted = GroupRingElement::from_terms(
                d.terms().iter().flat_map(|(c, p)| [(*c, p.concat(&Word::generator(j))), (-*c, p.clone())]),
            );
            acc = acc.add(&shifted);
        }
        prop_assert!(acc.is_zero());
    }
}
