#![allow(dead_code)]

use bott_core::kring::RingDescriptor;
use bott_core::split::SplitClass;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random split class: up to `max_terms` lines with exponents in
/// `[-range, range]` and nonzero multiplicities in `[lo, hi]`.
pub fn random_class(
    rng: &mut ChaCha8Rng,
    ring: &RingDescriptor,
    max_terms: usize,
    range: i64,
    (lo, hi): (i64, i64),
) -> SplitClass {
    let chars = ring.character_count() as i64;
    let mut out = SplitClass::new(ring);
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let exps: Vec<i64> = ring
            .factors()
            .iter()
            .map(|_| rng.gen_range(-range..=range))
            .collect();
        let chi = rng.gen_range(0..chars);
        let mut m = 0;
        while m == 0 {
            m = rng.gen_range(lo..=hi);
        }
        out.push(exps, chi, m).unwrap();
    }
    out
}

pub fn geometries() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::point(),
        RingDescriptor::projective(1),
        RingDescriptor::projective(2),
        RingDescriptor::projective(3),
        RingDescriptor::product(1, 1),
        RingDescriptor::product(1, 2),
        RingDescriptor::product(2, 2),
    ]
}

/// Strategy for classes on `ring` given as `(exponents, character, multiplicity)` lists.
pub fn class_strategy(
    ring: RingDescriptor,
    range: i64,
    mult: std::ops::RangeInclusive<i64>,
) -> impl Strategy<Value = SplitClass> {
    let factors = ring.factors().len();
    let chars = ring.character_count();
    let term = (
        prop::collection::vec(-range..=range, factors),
        0..chars,
        mult,
    );
    prop::collection::vec(term, 1..4).prop_map(move |terms| {
        let mut out = SplitClass::new(&ring);
        for (e, c, m) in terms {
            if m != 0 {
                out.push(e, c as i64, m).unwrap();
            }
        }
        out
    })
}
