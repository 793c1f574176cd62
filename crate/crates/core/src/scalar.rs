//! Exact coefficient types for K-classes.
//!
//! Everything in this crate is exact: a class in `K_0(X)[1/k]` has
//! coefficients in `Z[1/k]`, and equalities are checked with zero tolerance.
//! The [`Scalar`] trait abstracts over the rational type carrying those
//! coefficients. Two implementations ship: arbitrary precision
//! [`BigRational`] (the default used by the crate-root aliases) and the
//! fixed-width [`Rational64`], which is faster but panics on overflow.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// An exact rational number type usable as a K-class coefficient.
pub trait Scalar:
    Num + Signed + Clone + Debug + Display + PartialEq + Send + Sync + 'static
{
    /// Converts an integer. Fixed-width types panic on overflow.
    fn from_bigint(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    /// Builds `num / den`, reduced. `den` must be nonzero.
    fn from_fraction(num: &BigInt, den: &BigInt) -> Self {
        Self::from_bigint(num) / Self::from_bigint(den)
    }

    /// Reduced numerator and positive denominator.
    fn to_fraction(&self) -> (BigInt, BigInt);

    fn is_integer(&self) -> bool {
        self.to_fraction().1.is_one()
    }

    /// True when the denominator divides a power of `prime`
    /// (or is 1 when `prime` is `None`).
    fn in_localization(&self, prime: Option<u32>) -> bool {
        let (_, den) = self.to_fraction();
        match prime {
            None => den.is_one(),
            Some(k) => is_power_of(&den, k),
        }
    }

    /// True when `self` is `±k^s` for some integer `s`.
    fn is_unit_away_from(&self, k: u32) -> bool {
        let (num, den) = self.to_fraction();
        !num.is_zero() && is_power_of(&num.abs(), k) && is_power_of(&den, k)
    }
}

/// `n = k^s` for some `s ≥ 0` (with `n > 0`).
pub fn is_power_of(n: &BigInt, k: u32) -> bool {
    if !n.is_positive() {
        return false;
    }
    let k = BigInt::from(k);
    let mut n = n.clone();
    while !n.is_one() {
        let (q, r) = n.div_rem(&k);
        if !r.is_zero() {
            return false;
        }
        n = q;
    }
    true
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn from_fraction(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn to_fraction(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

impl Scalar for Rational64 {
    fn from_bigint(n: &BigInt) -> Self {
        let v = n
            .to_i64()
            .unwrap_or_else(|| panic!("integer {n} does not fit in Rational64"));
        Rational64::from_integer(v)
    }

    fn to_fraction(&self) -> (BigInt, BigInt) {
        (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

/// Renders a scalar as `n` or `n/d`.
pub fn format_scalar<S: Scalar>(x: &S) -> String {
    let (n, d) = x.to_fraction();
    if d.is_one() {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}
