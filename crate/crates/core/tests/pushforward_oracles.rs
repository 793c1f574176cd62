mod common;

use bott_core::kring::RingDescriptor;
use bott_core::pushforward::{
    chi, frobenius_rank_bookkeeping, pullback_base, pushforward_point, pushforward_relative,
    verify_arr, verify_arr_relative,
};
use bott_core::split::SplitClass;
use bott_core::{KElem, Q, Q64};
use common::class_strategy;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Number of vectors in `Z^len` with entries `>= lo` summing to `total`.
fn count_vectors(len: u32, lo: i64, total: i64) -> i64 {
    if len == 0 {
        return i64::from(total == 0);
    }
    let mut acc = 0;
    let mut first = lo;
    while first + lo * (len as i64 - 1) <= total {
        acc += count_vectors(len - 1, lo, total - first);
        first += 1;
    }
    acc
}

/// χ(P^n, O(a)) from Čech cohomology: `H^0` counts monomials of degree `a`
/// in `n + 1` variables, `H^n` counts Laurent monomials with every exponent
/// negative and total degree `a`.
fn cech_chi(n: u32, a: i64) -> i64 {
    let h0 = if a >= 0 {
        count_vectors(n + 1, 0, a)
    } else {
        0
    };
    let hn = if n > 0 && a < -(n as i64) {
        count_vectors(n + 1, 1, -a)
    } else {
        0
    };
    if n.is_multiple_of(2) {
        h0 + hn
    } else {
        h0 - hn
    }
}

#[test]
fn closed_form_matches_cech_counts() {
    for n in 1..=4 {
        for a in -6..=6 {
            assert_eq!(chi(n, a), BigInt::from(cech_chi(n, a)), "n={n} a={a}");
        }
    }
}

fn oracle_pushforward(n: u32, x: &SplitClass) -> i64 {
    x.terms()
        .map(|(k, m)| m * cech_chi(n, k.exponents[0]))
        .sum()
}

proptest! {
    #[test]
    fn pushforward_is_well_defined(x in class_strategy(RingDescriptor::projective(3), 3, -3..=3)) {
        let e: KElem = x.evaluate().unwrap();
        let got = pushforward_point(3, &e).unwrap();
        prop_assert_eq!(got, Q::from_integer(oracle_pushforward(3, &x).into()));
        // any other presentation of the same class pushes forward the same way
        let other = SplitClass::from_element(&e).unwrap();
        prop_assert_eq!(oracle_pushforward(3, &other), oracle_pushforward(3, &x));
    }

    #[test]
    fn arr_over_point(x in class_strategy(RingDescriptor::projective(2), 3, -3..=3),
                      p in prop::sample::select(vec![2u32, 3, 5])) {
        let rep = verify_arr::<Q>(2, p, &x).unwrap();
        prop_assert!(rep.equal);
        let lhs = Q::from_integer(oracle_pushforward(2, &x).into());
        prop_assert_eq!(rep.lhs.coeff_at(&[]), lhs);
    }

    #[test]
    fn arr_over_p1(x in class_strategy(RingDescriptor::product(1, 2), 2, -2..=2),
                   p in prop::sample::select(vec![2u32, 3])) {
        prop_assert!(verify_arr_relative::<Q>(1, 2, p, &x).unwrap().equal);
    }

    #[test]
    fn projection_formula(x in class_strategy(RingDescriptor::product(2, 1), 3, -3..=3),
                          y in class_strategy(RingDescriptor::projective(2), 3, -3..=3)) {
        let x: KElem = x.evaluate().unwrap();
        let y: KElem = y.evaluate().unwrap();
        let lhs = pushforward_relative(2, 1, &(&x * &pullback_base(1, &y).unwrap())).unwrap();
        let rhs = &pushforward_relative(2, 1, &x).unwrap() * &y;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn relative_then_point_is_total(x in class_strategy(RingDescriptor::product(1, 1), 3, -3..=3)) {
        // χ(P^1 x P^1, O(a, b)) = χ(a) χ(b)
        let e: KElem = x.evaluate().unwrap();
        let base = pushforward_relative(1, 1, &e).unwrap();
        let total = pushforward_point(1, &base).unwrap();
        let expected: i64 = x
            .terms()
            .map(|(k, m)| m * cech_chi(1, k.exponents[0]) * cech_chi(1, k.exponents[1]))
            .sum();
        prop_assert_eq!(total, Q::from_integer(expected.into()));
    }
}

#[test]
fn worked_anchors() {
    let r = RingDescriptor::projective(1);
    let one = verify_arr::<Q>(1, 2, &SplitClass::trivial(&r, 1)).unwrap();
    assert!(one.equal);
    assert_eq!(one.lhs.to_string(), "1");
    let h = verify_arr::<Q>(1, 2, &SplitClass::line(&r, &[1]).unwrap()).unwrap();
    assert!(h.equal);
    assert_eq!(h.lhs.to_string(), "2");
    let r2 = RingDescriptor::projective(2);
    let o2 = verify_arr::<Q>(2, 2, &SplitClass::trivial(&r2, 1)).unwrap();
    assert!(o2.equal);
    assert_eq!(o2.rhs.to_string(), "1");
}

#[test]
fn machine_rationals_agree_on_small_cases() {
    let r = RingDescriptor::projective(2);
    for a in -3..=3 {
        let e = SplitClass::line(&r, &[a]).unwrap();
        for p in [2, 3, 5] {
            let big = verify_arr::<Q>(2, p, &e).unwrap();
            let small = verify_arr::<Q64>(2, p, &e).unwrap();
            assert!(big.equal && small.equal);
            assert_eq!(big.lhs.to_string(), small.lhs.to_string());
        }
    }
}

#[test]
fn rank_bookkeeping() {
    for r in 0..=3 {
        for p in [2, 3, 5] {
            assert!(frobenius_rank_bookkeeping::<Q>(r, p).unwrap());
        }
    }
}
