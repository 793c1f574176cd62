//! Seeded randomized checks run by `kind = "properties"` suite cases.

use bott_core::kring::RingDescriptor;
use bott_core::lambda::{adams, theta};
use bott_core::pushforward::{verify_arr, verify_arr_relative};
use bott_core::split::SplitClass;
use bott_core::tau::tau_k0_class;
use bott_core::{KElem, Result, VerificationReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub const PROPERTIES: &[&str] = &[
    "arr",
    "arr-relative",
    "adams-frobenius",
    "theta-multiplicative",
    "theta-presentation",
    "tau-theta",
    "inverse",
];

fn random_class(rng: &mut ChaCha8Rng, ring: &RingDescriptor, effective: bool) -> SplitClass {
    let mut out = SplitClass::new(ring);
    while out.is_empty() {
        for _ in 0..rng.gen_range(1..=3) {
            let exps = ring
                .factors()
                .iter()
                .map(|_| rng.gen_range(-3..=3))
                .collect();
            let m = if effective {
                rng.gen_range(1..=2)
            } else {
                [-2, -1, 1, 2][rng.gen_range(0..4)]
            };
            out.push(exps, 0, m)
                .expect("exponent count matches the ring");
        }
    }
    out
}

/// `h^b (1 - h_j^{-1})^{n_j + 1}`, which is zero in `K_0`.
fn relation(ring: &RingDescriptor, j: usize, b: &[i64]) -> SplitClass {
    let n = ring.factors()[j] as i64;
    let mut out = SplitClass::new(ring);
    let mut binom = 1i64;
    for i in 0..=n + 1 {
        let mut e = b.to_vec();
        e[j] -= i;
        out.push(e, 0, if i % 2 == 0 { binom } else { -binom })
            .expect("exponent count matches the ring");
        binom = binom * (n + 1 - i) / (i + 1);
    }
    out
}

/// One sample: `Ok(None)` when the identity holds, `Ok(Some(msg))` when it fails.
fn sample(property: &str, rng: &mut ChaCha8Rng, n: u32, p: u32) -> Result<Option<String>> {
    let pn = RingDescriptor::projective(n);
    let outcome = match property {
        "arr" => {
            let e = random_class(rng, &pn, false);
            let rep = verify_arr::<bott_core::Q>(n, p, &e)?;
            (!rep.equal).then(|| format!("{e}: {} != {}", rep.lhs, rep.rhs))
        }
        "arr-relative" => {
            let ring = RingDescriptor::product(1, n);
            let e = random_class(rng, &ring, false);
            let rep = verify_arr_relative::<bott_core::Q>(1, n, p, &e)?;
            (!rep.equal).then(|| format!("{e}: {} != {}", rep.lhs, rep.rhs))
        }
        "adams-frobenius" => {
            let e = random_class(rng, &pn, false);
            let psi: KElem = adams(p, &e)?;
            let sub = e.evaluate::<bott_core::Q>()?.substitute_powers(p as i64);
            (psi != sub).then(|| format!("{e}: {psi} != {sub}"))
        }
        "theta-multiplicative" => {
            let a = random_class(rng, &pn, true);
            let b = random_class(rng, &pn, true);
            let whole: KElem = theta(p, &a.direct_sum(&b)?)?;
            let parts = &theta::<bott_core::Q>(p, &a)? * &theta(p, &b)?;
            (whole != parts).then(|| format!("{a} + {b}: {whole} != {parts}"))
        }
        "theta-presentation" => {
            let ring = pn.with_inverted_prime(p)?;
            let x = random_class(rng, &ring, false);
            let b = [rng.gen_range(-2..=2)];
            let y = x.direct_sum(&relation(&ring, 0, &b))?;
            let tx: KElem = theta(p, &x)?;
            let ty: KElem = theta(p, &y)?;
            (tx != ty).then(|| format!("{x} vs {y}: {tx} != {ty}"))
        }
        "tau-theta" => {
            let e = random_class(rng, &pn, true);
            let tau: KElem = tau_k0_class(&e, p)?;
            let th: KElem = theta(p, &e)?;
            (tau != th).then(|| format!("{e}: {tau} != {th}"))
        }
        "inverse" => {
            // a single line plus a rank-zero virtual part has unit rank
            let ring = pn.with_inverted_prime(p)?;
            let mut x = SplitClass::line(&ring, &[rng.gen_range(-3..=3)])?;
            x.push(vec![rng.gen_range(-3..=3)], 0, 1)?;
            x.push(vec![rng.gen_range(-3..=3)], 0, -1)?;
            let e: KElem = x.evaluate()?;
            let (inv, len) = e.invert_with_len(p)?;
            let prod = &e * &inv;
            if !prod.is_one() {
                Some(format!("{x}: x * x^-1 = {prod}"))
            } else if len > n as usize + 1 {
                Some(format!("{x}: series length {len}"))
            } else {
                None
            }
        }
        other => {
            return Err(bott_core::Error::InvalidArgument(format!(
                "unknown property '{other}' (known: {})",
                PROPERTIES.join(", ")
            )))
        }
    };
    Ok(outcome)
}

/// Runs `count` samples; passes iff every one holds.
pub fn run_property(
    case_id: &str,
    property: &str,
    seed: u64,
    count: u32,
    n: u32,
    p: u32,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut held = 0u32;
    let mut first_failure = None;
    for _ in 0..count {
        match sample(property, &mut rng, n, p)? {
            None => held += 1,
            Some(msg) => {
                first_failure.get_or_insert(msg);
            }
        }
    }
    let mut report = VerificationReport::compare(case_id, json!(held), json!(count))
        .with_trace("property", json!(property))
        .with_trace("seed", json!(seed));
    if let Some(msg) = first_failure {
        report = report.with_message(format!("first counterexample: {msg}"));
    }
    Ok(report)
}
