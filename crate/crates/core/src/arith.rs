//! Small integer helpers shared by the algebra modules.

use num_bigint::BigInt;
use num_traits::One;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Generalized binomial coefficient `a (a-1) ... (a-i+1) / i!`, valid for negative `a`.
pub fn binomial(a: &BigInt, i: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..i {
        num *= a - BigInt::from(j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

pub fn binomial_i64(a: i64, i: u32) -> BigInt {
    binomial(&BigInt::from(a), i)
}

/// `C(n, i)` reduced modulo `p`.
pub fn binomial_mod(n: u64, i: u64, p: u64) -> u64 {
    let b = binomial(&BigInt::from(n), i as u32);
    let r = b % BigInt::from(p);
    let r: u64 = r.try_into().unwrap_or(0);
    r
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime `p` (Fermat).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "zero has no inverse mod {p}");
    pow_mod(a, p - 2, p)
}
