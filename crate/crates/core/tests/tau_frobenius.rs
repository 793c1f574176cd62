mod common;

use bott_core::frobenius::{
    build_frob_algebra, check_gr_iso, diagonal_conormal, frobenius_pushforward_basis,
    hypersurface_conormal_check, parse_samples, AffineModel, FrobAlgebra,
};
use bott_core::kring::RingDescriptor;
use bott_core::lambda::theta;
use bott_core::poly::{groebner_basis, is_member, normal_form, FpPoly, GroebnerBudget};
use bott_core::tau::{tau_basis, tau_graded_dims, tau_k0_class, tau_sum_isomorphism_check};
use bott_core::{KElem, Status, Q};
use common::class_strategy;
use proptest::prelude::*;

/// Coefficients of `(1 + q + ... + q^{p-1})^r` by repeated convolution.
fn q_binomial_dims(r: u32, p: u32) -> Vec<u64> {
    let mut acc = vec![1u64];
    for _ in 0..r {
        let mut next = vec![0u64; acc.len() + p as usize - 1];
        for (i, a) in acc.iter().enumerate() {
            for j in 0..p as usize {
                next[i + j] += a;
            }
        }
        acc = next;
    }
    acc
}

#[test]
fn graded_dims_match_q_series() {
    for p in [2, 3, 5, 7] {
        for r in 0..=5 {
            assert_eq!(
                tau_graded_dims(r, p).unwrap(),
                q_binomial_dims(r, p),
                "r={r} p={p}"
            );
        }
    }
}

#[test]
fn basis_counts() {
    for p in [2u32, 3, 5] {
        for r in 0..=6 {
            assert_eq!(tau_basis(r, p).unwrap().len() as u64, (p as u64).pow(r));
            assert_eq!(
                frobenius_pushforward_basis(r.min(4), p).unwrap().len() as u64,
                (p as u64).pow(r.min(4))
            );
        }
    }
    assert!(tau_basis(1, 6).is_err());
}

#[test]
fn sum_isomorphism() {
    for p in [2, 3] {
        for r1 in 0..=2 {
            for r2 in 0..=2 {
                let rep = tau_sum_isomorphism_check(r1, r2, p).unwrap();
                assert!(rep.passed(), "{rep:?}");
            }
        }
    }
}

#[test]
fn gr_iso_small_cases() {
    for p in [2, 3, 5] {
        for r in 0..=3 {
            let rep = check_gr_iso(r, p).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.rhs, Some(serde_json::json!(q_binomial_dims(r, p))));
        }
    }
}

#[test]
fn conormal_nilpotency_is_sharp() {
    for p in [2, 3, 5] {
        for r in 1..=3 {
            let a = FrobAlgebra::new(r, p).unwrap();
            let (c, rep) = diagonal_conormal(&a).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(c.nilpotency, r * (p - 1) + 1);
            assert_eq!(c.basis.len() as u32, r);
        }
    }
}

#[test]
fn hypersurface_models_are_rejected_by_the_affine_builder() {
    let model = AffineModel::hypersurface("y^2-x^3-x", 3).unwrap();
    assert!(build_frob_algebra(&model).is_err());
}

#[test]
fn hypersurface_examples() {
    let budget = GroebnerBudget::default();
    let curve = AffineModel::hypersurface("y^2-x^3-x", 3).unwrap();
    let samples = parse_samples("(0,0);(2,1);(1,0)").unwrap();
    // (1,0) is off the curve over F_3: 0 - 1 - 1 = 1
    let rep = hypersurface_conormal_check(&curve, &samples, budget).unwrap();
    assert_eq!(rep.status, Status::Error);
    let rep = hypersurface_conormal_check(&curve, &samples[..2], budget).unwrap();
    assert!(rep.passed(), "{rep:?}");

    let surface = AffineModel::hypersurface("z - x*y", 2).unwrap();
    assert_eq!(surface.dimension(), 2);
    let rep = hypersurface_conormal_check(&surface, &[vec![1, 1, 1]], budget).unwrap();
    assert!(rep.passed(), "{rep:?}");

    let cusp = AffineModel::hypersurface("y^2 - x^3", 5).unwrap();
    let rep = hypersurface_conormal_check(&cusp, &[vec![0, 0]], budget).unwrap();
    assert_eq!(rep.status, Status::Error);
    assert!(rep.message.unwrap().contains("singular"));
}

fn poly_strategy(p: u64) -> impl Strategy<Value = FpPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 3), 0i64..p as i64), 1..4)
        .prop_map(move |terms| FpPoly::from_terms(3, p, terms))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tau_class_is_theta(x in class_strategy(RingDescriptor::projective(2), 2, 1..=2),
                          p in prop::sample::select(vec![2u32, 3])) {
        let lhs: KElem = tau_k0_class(&x, p).unwrap();
        let rhs: KElem = theta(p, &x).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ideal_membership(f in poly_strategy(5), g in poly_strategy(5), h in poly_strategy(5)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let gb = groebner_basis(&[f.clone(), g.clone()], GroebnerBudget::default());
        // a budget failure is acceptable, anything else must be a valid basis
        if let Ok(gb) = gb {
            prop_assert!(is_member(&f, &gb));
            prop_assert!(is_member(&g, &gb));
            prop_assert!(normal_form(&h.mul(&f).add(&g), &gb).is_zero());
            let again = groebner_basis(&gb, GroebnerBudget::default()).unwrap();
            prop_assert_eq!(again, gb.clone());
            let nf = normal_form(&h, &gb);
            prop_assert_eq!(normal_form(&nf, &gb), nf);
        }
    }
}

#[test]
fn theta_class_of_tau_agrees_with_algebra_rank() {
    let r = RingDescriptor::projective(1);
    for p in [2u32, 3, 5] {
        for rank in 1..=3 {
            let e = bott_core::SplitClass::trivial(&r, rank);
            let cls: KElem = tau_k0_class(&e, p).unwrap();
            assert_eq!(
                cls.rank(),
                Q::from_integer((p as i64).pow(rank as u32).into())
            );
        }
    }
}
