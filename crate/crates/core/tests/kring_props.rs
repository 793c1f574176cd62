mod common;

use bott_core::kring::{KElement, RingDescriptor};
use bott_core::split::SplitClass;
use bott_core::{KElem, KElem64};
use common::class_strategy;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn p2() -> RingDescriptor {
    RingDescriptor::projective(2)
}

fn p1p2() -> RingDescriptor {
    RingDescriptor::product(1, 2)
}

fn eq_p1() -> RingDescriptor {
    RingDescriptor::projective(1).with_cyclic_order(3).unwrap()
}

fn eval(x: &SplitClass) -> KElem {
    x.evaluate().unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in class_strategy(p1p2(), 3, -2..=2),
                   b in class_strategy(p1p2(), 3, -2..=2),
                   c in class_strategy(p1p2(), 3, -2..=2)) {
        let (a, b, c) = (eval(&a), eval(&b), eval(&c));
        let one = KElem::one(a.ring());
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn equivariant_ring_axioms(a in class_strategy(eq_p1(), 2, -2..=2),
                               b in class_strategy(eq_p1(), 2, -2..=2),
                               c in class_strategy(eq_p1(), 2, -2..=2)) {
        let (a, b, c) = (eval(&a), eval(&b), eval(&c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn rank_is_a_ring_morphism(a in class_strategy(p2(), 3, -3..=3),
                               b in class_strategy(p2(), 3, -3..=3)) {
        let (ea, eb) = (eval(&a), eval(&b));
        prop_assert_eq!(ea.rank(), BigRational::from_integer(a.rank().into()));
        prop_assert_eq!((&ea * &eb).rank(), ea.rank() * eb.rank());
        prop_assert_eq!((&ea + &eb).rank(), ea.rank() + eb.rank());
    }

    #[test]
    fn line_classes_multiply(a in -4i64..=4, b in -4i64..=4, c in -4i64..=4, d in -4i64..=4) {
        let r = p1p2();
        let x = KElem::line_class(&r, &[a, b], None).unwrap();
        let y = KElem::line_class(&r, &[c, d], None).unwrap();
        prop_assert_eq!(&x * &y, KElem::line_class(&r, &[a + c, b + d], None).unwrap());
    }

    #[test]
    fn augmentation_is_nilpotent(x in class_strategy(p1p2(), 3, -2..=2)) {
        let x = eval(&x);
        let r = x.rank();
        let aug = &x - &KElem::constant(x.ring(), r);
        // dimension 3, so the fourth power vanishes
        prop_assert!(aug.pow(4).is_zero());
    }

    #[test]
    fn inverse_is_two_sided(x in class_strategy(p2(), 3, 1..=1)) {
        // single lines and sums of lines whose rank is a power of 2
        let rank = x.rank();
        prop_assume!(rank > 0 && (rank as u64).is_power_of_two());
        let ring = p2().with_inverted_prime(2).unwrap();
        let x: KElem = x.on_ring(&ring).unwrap().evaluate().unwrap();
        let (inv, len) = x.invert_with_len(2).unwrap();
        prop_assert!((&x * &inv).is_one());
        prop_assert!((&inv * &x).is_one());
        prop_assert!(len <= 3);
    }

    #[test]
    fn json_round_trip(x in class_strategy(eq_p1(), 3, -3..=3)) {
        let x = eval(&x);
        prop_assert_eq!(KElem::from_json(&x.to_json()).unwrap(), x.clone());
        let text = serde_json::to_string(&x).unwrap();
        let back: KElem = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn presentation_round_trip(x in class_strategy(p1p2(), 3, -3..=3)) {
        let printed = x.to_string();
        prop_assert_eq!(SplitClass::parse(&printed, x.ring()).unwrap(), x.clone());
        let back = SplitClass::from_element(&eval(&x)).unwrap();
        prop_assert_eq!(eval(&back), eval(&x));
    }

    #[test]
    fn scalar_types_agree(a in class_strategy(p2(), 2, -2..=2),
                          b in class_strategy(p2(), 2, -2..=2)) {
        let big = &eval(&a) * &eval(&b);
        let small: KElem64 = &a.evaluate::<Rational64>().unwrap() * &b.evaluate::<Rational64>().unwrap();
        for (basis, c) in small.terms() {
            let c = BigRational::new((*c.numer()).into(), (*c.denom()).into());
            prop_assert_eq!(big.coeff(basis), c);
        }
        prop_assert_eq!(big.len(), small.len());
    }
}

#[test]
fn truncation_relation_holds() {
    // (h - 1)^{n+1} = 0 on P^n, for every n and every twist
    for n in 0..=4 {
        let r = RingDescriptor::projective(n);
        for a in -3..=3 {
            let h = KElem::line_class(&r, &[1], None).unwrap();
            let twist = KElem::line_class(&r, &[a], None).unwrap();
            let rel = &(&h - &KElem::one(&r)).pow(n + 1) * &twist;
            assert!(rel.is_zero(), "n={n} a={a}");
        }
    }
}

#[test]
fn dual_of_hyperplane_on_p1() {
    let r = RingDescriptor::projective(1);
    let x = KElem::line_class(&r, &[-1], None).unwrap();
    assert_eq!(x.to_string(), "1 - t");
    assert!(BigRational::zero() < x.rank() && x.rank() == BigRational::one());
}

#[test]
fn mismatched_rings_are_rejected() {
    let a = KElem::one(&RingDescriptor::projective(1));
    let b = KElem::one(&RingDescriptor::projective(2));
    assert!(a.checked_add(&b).is_err());
    assert!(a.checked_mul(&b).is_err());
    let _ = KElement::<BigRational>::zero(&RingDescriptor::point());
}
