//! Grothendieck rings of the test geometries.
//!
//! For `X = P^{n_1} x ... x P^{n_s}` over a field, `K_0(X)` is the truncated
//! polynomial ring `Z[t_1, ..., t_s] / (t_j^{n_j + 1})` with `t_j = h_j - 1`,
//! `h_j` the pullback of `O(1)` from the j-th factor. A point is the empty
//! product (`K_0 = Z`). Two optional extensions are layered on the
//! coefficients:
//!
//! * a cyclic group `C_l` acting trivially, which tensors the ring with the
//!   representation ring `Z[σ]/(σ^l - 1)`;
//! * an inverted prime `k`, which replaces `Z` by `Z[1/k]`.
//!
//! Elements are stored sparsely in the basis `t^i σ^c`. In this basis the
//! augmentation ideal (the kernel of [`KElement::rank`] on the non-equivariant
//! part) is spanned by the monomials with `i ≠ 0`, which makes truncation and
//! nilpotency checks direct.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::arith::{binomial_i64, is_prime};
use crate::error::{Error, Result};
use crate::scalar::{format_scalar, Scalar};

/// Which geometry an element lives on, and which coefficient ring it uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingDescriptor {
    factors: Vec<u32>,
    cyclic_order: Option<u32>,
    inverted_prime: Option<u32>,
}

impl RingDescriptor {
    pub fn new(
        factors: Vec<u32>,
        cyclic_order: Option<u32>,
        inverted_prime: Option<u32>,
    ) -> Result<Self> {
        if let Some(l) = cyclic_order {
            if l < 2 {
                return Err(Error::InvalidDescriptor(format!(
                    "cyclic order must be at least 2, got {l}"
                )));
            }
        }
        if let Some(k) = inverted_prime {
            if !is_prime(k as u64) {
                return Err(Error::InvalidDescriptor(format!(
                    "inverted prime must be prime, got {k}"
                )));
            }
        }
        Ok(Self {
            factors,
            cyclic_order,
            inverted_prime,
        })
    }

    pub fn point() -> Self {
        Self {
            factors: Vec::new(),
            cyclic_order: None,
            inverted_prime: None,
        }
    }

    pub fn projective(n: u32) -> Self {
        Self {
            factors: vec![n],
            cyclic_order: None,
            inverted_prime: None,
        }
    }

    /// `P^m x P^n`; the first factor is the base in relative computations.
    pub fn product(m: u32, n: u32) -> Self {
        Self {
            factors: vec![m, n],
            cyclic_order: None,
            inverted_prime: None,
        }
    }

    pub fn with_inverted_prime(self, k: u32) -> Result<Self> {
        Self::new(self.factors, self.cyclic_order, Some(k))
    }

    pub fn with_cyclic_order(self, l: u32) -> Result<Self> {
        Self::new(self.factors, Some(l), self.inverted_prime)
    }

    /// Same geometry and coefficients, characters dropped.
    pub fn without_cyclic(&self) -> Self {
        Self {
            factors: self.factors.clone(),
            cyclic_order: None,
            inverted_prime: self.inverted_prime,
        }
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn cyclic_order(&self) -> Option<u32> {
        self.cyclic_order
    }

    pub fn inverted_prime(&self) -> Option<u32> {
        self.inverted_prime
    }

    pub fn is_equivariant(&self) -> bool {
        self.cyclic_order.is_some()
    }

    /// Number of characters (1 when non-equivariant).
    pub fn character_count(&self) -> u32 {
        self.cyclic_order.unwrap_or(1)
    }

    /// Total dimension `Σ n_j`; bounds the nilpotency order of the augmentation ideal.
    pub fn dimension(&self) -> u32 {
        self.factors.iter().sum()
    }

    fn check_basis(&self, b: &Basis) -> Result<()> {
        if b.idx.len() != self.factors.len() {
            return Err(Error::IndexOutOfRange(format!(
                "index {:?} has {} entries, ring {} has {} factors",
                b.idx,
                b.idx.len(),
                self,
                self.factors.len()
            )));
        }
        if let Some((i, n)) = b.idx.iter().zip(&self.factors).find(|(i, n)| i > n) {
            return Err(Error::IndexOutOfRange(format!(
                "t-degree {i} exceeds fiber dimension {n}"
            )));
        }
        if b.chi >= self.character_count() {
            return Err(Error::IndexOutOfRange(format!(
                "character {} out of range for {}",
                b.chi, self
            )));
        }
        Ok(())
    }

    fn normalize_character(&self, c: i64) -> u32 {
        match self.cyclic_order {
            Some(l) => c.rem_euclid(l as i64) as u32,
            None => 0,
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "pt")?;
        } else {
            let parts: Vec<String> = self.factors.iter().map(|n| format!("P^{n}")).collect();
            write!(f, "{}", parts.join("x"))?;
        }
        if let Some(l) = self.cyclic_order {
            write!(f, "[C_{l}]")?;
        }
        if let Some(k) = self.inverted_prime {
            write!(f, "[1/{k}]")?;
        }
        Ok(())
    }
}

/// A basis monomial `t_1^{i_1} ... t_s^{i_s} σ^c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis {
    pub idx: Vec<u32>,
    pub chi: u32,
}

impl Basis {
    pub fn new(idx: Vec<u32>, chi: u32) -> Self {
        Self { idx, chi }
    }

    pub fn unit(factors: usize) -> Self {
        Self {
            idx: vec![0; factors],
            chi: 0,
        }
    }

    pub fn t_degree(&self) -> u32 {
        self.idx.iter().sum()
    }
}

/// An element of `K_0(X)` (possibly with characters and an inverted prime),
/// kept in canonical form: no stored zeros, indices in range, denominators
/// powers of the inverted prime.
#[derive(Debug, Clone, PartialEq)]
pub struct KElement<S> {
    ring: RingDescriptor,
    terms: BTreeMap<Basis, S>,
}

impl<S: Scalar> KElement<S> {
    pub fn zero(ring: &RingDescriptor) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &RingDescriptor) -> Self {
        Self::constant(ring, S::one())
    }

    pub fn from_integer(ring: &RingDescriptor, n: i64) -> Self {
        Self::constant(ring, S::from_i64(n))
    }

    /// `c · 1`. Panics if `c` violates the ring's denominator discipline;
    /// use [`KElement::from_terms`] for a fallible constructor.
    pub fn constant(ring: &RingDescriptor, c: S) -> Self {
        Self::from_terms(ring, [(Basis::unit(ring.factors.len()), c)])
            .expect("constant outside the coefficient ring")
    }

    /// Builds an element from (basis, coefficient) pairs; repeated bases add up.
    pub fn from_terms(
        ring: &RingDescriptor,
        terms: impl IntoIterator<Item = (Basis, S)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ring);
        for (b, c) in terms {
            ring.check_basis(&b)?;
            out.add_term(b, c);
        }
        out.validate()?;
        Ok(out)
    }

    /// The class of `σ^c` (a rank-one character line).
    pub fn character(ring: &RingDescriptor, c: i64) -> Self {
        let chi = ring.normalize_character(c);
        let mut out = Self::zero(ring);
        out.add_term(Basis::new(vec![0; ring.factors.len()], chi), S::one());
        out
    }

    /// `t_j` for factor `j`.
    pub fn t(ring: &RingDescriptor, j: usize) -> Result<Self> {
        let mut idx = vec![0; ring.factors.len()];
        if j >= idx.len() {
            return Err(Error::IndexOutOfRange(format!("factor {j} of {ring}")));
        }
        idx[j] = 1;
        Self::from_terms(ring, [(Basis::new(idx, 0), S::one())])
    }

    /// The class of `h_1^{a_1} ... h_s^{a_s} ⊗ σ^c`, expanded as
    /// `Π_j (1 + t_j)^{a_j}` with the binomial series truncated at `t_j^{n_j}`.
    /// Negative exponents are allowed.
    pub fn line_class(
        ring: &RingDescriptor,
        exponents: &[i64],
        character: Option<i64>,
    ) -> Result<Self> {
        if exponents.len() != ring.factors.len() {
            return Err(Error::InvalidArgument(format!(
                "line class needs {} exponents on {}, got {}",
                ring.factors.len(),
                ring,
                exponents.len()
            )));
        }
        let chi = match (character, ring.cyclic_order) {
            (None, _) | (Some(0), None) => 0,
            (Some(c), Some(_)) => ring.normalize_character(c),
            (Some(c), None) => {
                return Err(Error::InvalidArgument(format!(
                    "character {c} on non-equivariant ring {ring}"
                )))
            }
        };
        // Per-factor coefficient lists, then their tensor product.
        let per_factor: Vec<Vec<BigInt>> = exponents
            .iter()
            .zip(&ring.factors)
            .map(|(&a, &n)| (0..=n).map(|i| binomial_i64(a, i)).collect())
            .collect();
        let mut terms: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), BigInt::one())];
        for coeffs in &per_factor {
            let mut next = Vec::with_capacity(terms.len() * coeffs.len());
            for (idx, c) in &terms {
                for (i, b) in coeffs.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let mut idx = idx.clone();
                    idx.push(i as u32);
                    next.push((idx, c * b));
                }
            }
            terms = next;
        }
        let mut out = Self::zero(ring);
        for (idx, c) in terms {
            out.add_term(Basis::new(idx, chi), S::from_bigint(&c));
        }
        Ok(out)
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &S)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(&self.ring)
    }

    pub fn coeff(&self, b: &Basis) -> S {
        self.terms.get(b).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of `t^idx` (character 0).
    pub fn coeff_at(&self, idx: &[u32]) -> S {
        self.coeff(&Basis::new(idx.to_vec(), 0))
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Largest t-degree carrying a nonzero coefficient (`None` for zero).
    pub fn t_degree(&self) -> Option<u32> {
        self.terms.keys().map(Basis::t_degree).max()
    }

    fn add_term(&mut self, b: Basis, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    /// Checks the canonical-form invariants.
    pub fn validate(&self) -> Result<()> {
        for (b, c) in &self.terms {
            self.ring.check_basis(b)?;
            if c.is_zero() {
                return Err(Error::InvalidArgument(format!("stored zero at {b:?}")));
            }
            if !c.in_localization(self.ring.inverted_prime) {
                return Err(Error::DenominatorViolation {
                    coeff: format_scalar(c),
                    prime: self.ring.inverted_prime,
                });
            }
        }
        Ok(())
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DescriptorMismatch {
                left: self.ring.clone(),
                right: other.ring.clone(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.ring);
        let l = self.ring.character_count();
        for (b1, c1) in &self.terms {
            'inner: for (b2, c2) in &other.terms {
                let mut idx = Vec::with_capacity(b1.idx.len());
                for ((i, j), n) in b1.idx.iter().zip(&b2.idx).zip(&self.ring.factors) {
                    let s = i + j;
                    if s > *n {
                        continue 'inner;
                    }
                    idx.push(s);
                }
                let chi = (b1.chi + b2.chi) % l;
                out.add_term(Basis::new(idx, chi), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(&self.ring);
        for (b, v) in &self.terms {
            out.add_term(b.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Division by a scalar, enforcing the denominator discipline on the result.
    pub fn div_scalar(&self, c: &S) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        let out = self.scale(&(S::one() / c.clone()));
        out.validate()?;
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The augmentation `t_j ↦ 0, σ ↦ 1`.
    pub fn rank(&self) -> S {
        self.terms
            .iter()
            .filter(|(b, _)| b.idx.iter().all(|&i| i == 0))
            .fold(S::zero(), |acc, (_, c)| acc + c.clone())
    }

    /// Inverse in `K_0[1/k]` via `1/r + (r - x)/r^2 + (r - x)^2/r^3 + ...`,
    /// `r = rank(x)`.
    pub fn invert(&self, k: u32) -> Result<Self> {
        self.invert_with_len(k).map(|(y, _)| y)
    }

    /// Like [`KElement::invert`], also returning the number of nonzero series terms.
    pub fn invert_with_len(&self, k: u32) -> Result<(Self, usize)> {
        if self.ring.inverted_prime != Some(k) {
            return Err(Error::WrongInvertedPrime {
                expected: k,
                found: self.ring.inverted_prime,
            });
        }
        let r = self.rank();
        if !r.is_unit_away_from(k) {
            return Err(Error::NonUnitRank {
                rank: format_scalar(&r),
                prime: k,
            });
        }
        let ring = &self.ring;
        let nilpotent = Self::constant(ring, r.clone()) - self;
        let mut term = Self::constant(ring, S::one() / r.clone());
        let mut sum = Self::zero(ring);
        let mut len = 0;
        // The augmentation ideal of a non-equivariant class has nilpotency
        // order dimension + 1.
        for _ in 0..=ring.dimension() {
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            len += 1;
            term = (&term * &nilpotent).div_scalar(&r)?;
        }
        if !term.is_zero() {
            return Err(Error::NotNilpotent);
        }
        sum.validate()?;
        Ok((sum, len))
    }

    /// The substitution `h_j ↦ h_j^k`, `σ ↦ σ^k` applied to the expanded
    /// class, computed directly in the t-basis via `t_j ↦ (1 + t_j)^k - 1`.
    /// On split classes this agrees with the Adams operation ψ^k; for `k = p`
    /// it is pullback along the absolute Frobenius.
    pub fn substitute_powers(&self, k: i64) -> Self {
        let ring = &self.ring;
        let s = ring.factors.len();
        let images: Vec<Self> = (0..s)
            .map(|j| {
                let mut exps = vec![0i64; s];
                exps[j] = k;
                Self::line_class(ring, &exps, None).expect("exponent count matches")
                    - &Self::one(ring)
            })
            .collect();
        let mut out = Self::zero(ring);
        for (b, c) in &self.terms {
            let mut term = Self::character(ring, k * b.chi as i64);
            for (j, &i) in b.idx.iter().enumerate() {
                if i > 0 {
                    term = &term * &images[j].pow(i);
                }
            }
            out = &out + &term.scale(c);
        }
        out
    }

    /// Re-expresses the element on a ring with the same geometry and
    /// characters but a (possibly new) inverted prime.
    pub fn with_ring(&self, ring: &RingDescriptor) -> Result<Self> {
        if ring.factors != self.ring.factors || ring.cyclic_order != self.ring.cyclic_order {
            return Err(Error::DescriptorMismatch {
                left: self.ring.clone(),
                right: ring.clone(),
            });
        }
        let out = Self {
            ring: ring.clone(),
            terms: self.terms.clone(),
        };
        out.validate()?;
        Ok(out)
    }

    /// Serializes to the `{"factors","l","k","terms"}` JSON form.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_wire()).expect("wire form serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let wire: WireElement = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidArgument(format!("bad KElement JSON: {e}")))?;
        Self::from_wire(wire)
    }

    fn to_wire(&self) -> WireElement {
        let equivariant = self.ring.is_equivariant();
        WireElement {
            factors: self.ring.factors.clone(),
            l: self.ring.cyclic_order,
            k: self.ring.inverted_prime,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| {
                    let (n, d) = c.to_fraction();
                    WireTerm {
                        idx: b.idx.clone(),
                        chi: equivariant.then_some(b.chi),
                        num: big_to_json(&n),
                        den: big_to_json(&d),
                    }
                })
                .collect(),
        }
    }

    fn from_wire(w: WireElement) -> Result<Self> {
        let ring = RingDescriptor::new(w.factors, w.l, w.k)?;
        let mut terms = Vec::with_capacity(w.terms.len());
        for t in w.terms {
            let n = json_to_big(&t.num)?;
            let d = json_to_big(&t.den)?;
            if d.is_zero() {
                return Err(Error::InvalidArgument("zero denominator".into()));
            }
            terms.push((
                Basis::new(t.idx, t.chi.unwrap_or(0)),
                S::from_fraction(&n, &d),
            ));
        }
        Self::from_terms(&ring, terms)
    }
}

#[derive(Serialize, Deserialize)]
struct WireElement {
    factors: Vec<u32>,
    l: Option<u32>,
    k: Option<u32>,
    terms: Vec<WireTerm>,
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    idx: Vec<u32>,
    chi: Option<u32>,
    num: Value,
    den: Value,
}

fn big_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn json_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::InvalidArgument(format!("non-integer coefficient {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad integer string {s:?}"))),
        other => Err(Error::InvalidArgument(format!("bad coefficient {other}"))),
    }
}

impl<S: Scalar> Serialize for KElement<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for KElement<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WireElement::deserialize(d)?;
        Self::from_wire(w).map_err(serde::de::Error::custom)
    }
}

impl<S: Scalar> fmt::Display for KElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let single = self.ring.factors.len() == 1;
        for (pos, (b, c)) in self.terms.iter().enumerate() {
            let mut mono = Vec::new();
            for (j, &i) in b.idx.iter().enumerate() {
                if i == 0 {
                    continue;
                }
                let var = if single {
                    "t".to_string()
                } else {
                    format!("t{}", j + 1)
                };
                mono.push(if i == 1 { var } else { format!("{var}^{i}") });
            }
            if b.chi > 0 {
                mono.push(if b.chi == 1 {
                    "s".into()
                } else {
                    format!("s^{}", b.chi)
                });
            }
            let negative = c.is_negative();
            let mag = format_scalar(&c.abs());
            let body = if mono.is_empty() {
                mag
            } else if c.abs().is_one() {
                mono.join("*")
            } else {
                format!("{mag}*{}", mono.join("*"))
            };
            match (pos, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, S: Scalar> $tr<&'a KElement<S>> for &'a KElement<S> {
            type Output = KElement<S>;
            /// Panics on a ring descriptor mismatch.
            fn $method(self, rhs: &'a KElement<S>) -> KElement<S> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a, S: Scalar> $tr<&'a KElement<S>> for KElement<S> {
            type Output = KElement<S>;
            fn $method(self, rhs: &'a KElement<S>) -> KElement<S> {
                (&self).$method(rhs)
            }
        }
        impl<S: Scalar> $tr<KElement<S>> for KElement<S> {
            type Output = KElement<S>;
            fn $method(self, rhs: KElement<S>) -> KElement<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<S: Scalar> Neg for &KElement<S> {
    type Output = KElement<S>;
    fn neg(self) -> KElement<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for KElement<S> {
    type Output = KElement<S>;
    fn neg(self) -> KElement<S> {
        -&self
    }
}
