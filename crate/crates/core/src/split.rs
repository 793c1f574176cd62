//! Split presentations: integer combinations of line classes.
//!
//! Every class on the supported geometries is a Z-combination of line
//! classes `h^a ⊗ σ^c`, which is the input form for ψ, θ and λ. The text
//! form used on the command line is
//!
//! ```text
//! class  := term (("+" | "-") term)*
//! term   := ["-"] [int "*"] "h(" [int ("," int)*] ")" ["@" int]
//! ```
//!
//! e.g. `2*h(-1)@0 - 1*h(0)@0`. The exponent list has one entry per
//! projective factor (none on a point) and `@c` picks the character; it may
//! only be nonzero on equivariant rings. Printing always uses the explicit
//! `m*h(...)` form, with `@c` only on equivariant rings, and parses back to
//! the same class.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::kring::{KElement, RingDescriptor};
use crate::scalar::Scalar;

/// Exponents per factor plus a character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineKey {
    pub exponents: Vec<i64>,
    pub character: u32,
}

/// A formal Z-combination of line classes on a fixed ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitClass {
    ring: RingDescriptor,
    terms: BTreeMap<LineKey, i64>,
}

impl SplitClass {
    pub fn new(ring: &RingDescriptor) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `m` copies of the trivial line.
    pub fn trivial(ring: &RingDescriptor, m: i64) -> Self {
        let mut out = Self::new(ring);
        out.push(vec![0; ring.factors().len()], 0, m)
            .expect("trivial line is valid");
        out
    }

    pub fn line(ring: &RingDescriptor, exponents: &[i64]) -> Result<Self> {
        let mut out = Self::new(ring);
        out.push(exponents.to_vec(), 0, 1)?;
        Ok(out)
    }

    pub fn from_terms(
        ring: &RingDescriptor,
        terms: impl IntoIterator<Item = (Vec<i64>, i64, i64)>,
    ) -> Result<Self> {
        let mut out = Self::new(ring);
        for (exps, chi, m) in terms {
            out.push(exps, chi, m)?;
        }
        Ok(out)
    }

    /// Adds `m · h^exponents ⊗ σ^character`, merging with an existing term.
    pub fn push(&mut self, exponents: Vec<i64>, character: i64, m: i64) -> Result<()> {
        if exponents.len() != self.ring.factors().len() {
            return Err(Error::InvalidArgument(format!(
                "line needs {} exponents on {}, got {}",
                self.ring.factors().len(),
                self.ring,
                exponents.len()
            )));
        }
        let character = match self.ring.cyclic_order() {
            Some(l) => character.rem_euclid(l as i64) as u32,
            None if character == 0 => 0,
            None => {
                return Err(Error::InvalidArgument(format!(
                    "character {character} on non-equivariant ring {}",
                    self.ring
                )))
            }
        };
        let key = LineKey {
            exponents,
            character,
        };
        let v = self.terms.get(&key).copied().unwrap_or(0) + m;
        if v == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
        Ok(())
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LineKey, i64)> {
        self.terms.iter().map(|(k, &m)| (k, m))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All multiplicities positive.
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&m| m > 0)
    }

    /// Virtual rank `Σ m`.
    pub fn rank(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Formal direct sum (concatenation of presentations).
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::DescriptorMismatch {
                left: self.ring.clone(),
                right: other.ring.clone(),
            });
        }
        let mut out = self.clone();
        for (k, &m) in &other.terms {
            out.push(k.exponents.clone(), k.character as i64, m)?;
        }
        Ok(out)
    }

    pub fn negated(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, &m)| (k.clone(), -m)).collect(),
        }
    }

    /// The same presentation read on another ring with the same geometry
    /// (e.g. after inverting a prime).
    pub fn on_ring(&self, ring: &RingDescriptor) -> Result<Self> {
        let mut out = Self::new(ring);
        for (k, &m) in &self.terms {
            out.push(k.exponents.clone(), k.character as i64, m)?;
        }
        Ok(out)
    }

    /// `Σ m · [h^a ⊗ σ^c]`.
    pub fn evaluate<S: Scalar>(&self) -> Result<KElement<S>> {
        let mut out = KElement::zero(&self.ring);
        for (k, &m) in &self.terms {
            let line = KElement::line_class(&self.ring, &k.exponents, Some(k.character as i64))?;
            out = &out + &line.scale(&S::from_i64(m));
        }
        Ok(out)
    }

    /// A split presentation of an integral class, via
    /// `t^i = (h - 1)^i = Σ_j C(i, j) (-1)^{i-j} h^j` per factor.
    pub fn from_element<S: Scalar>(x: &KElement<S>) -> Result<Self> {
        let ring = x.ring();
        let mut out = Self::new(ring);
        for (b, c) in x.terms() {
            let (num, den) = c.to_fraction();
            if den != BigInt::from(1) {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {c} is not an integer; no split presentation"
                )));
            }
            let m: i64 = (&num)
                .try_into()
                .map_err(|_| Error::InvalidArgument(format!("coefficient {num} overflows")))?;
            // Expand Π_j (h_j - 1)^{i_j}.
            let mut expansion: Vec<(Vec<i64>, i64)> = vec![(Vec::new(), 1)];
            for &i in &b.idx {
                let mut next = Vec::new();
                for (exps, c) in &expansion {
                    for j in 0..=i {
                        let binom = binom_small(i, j);
                        let sign = if (i - j) % 2 == 0 { 1 } else { -1 };
                        let mut e = exps.clone();
                        e.push(j as i64);
                        next.push((e, c * sign * binom));
                    }
                }
                expansion = next;
            }
            for (exps, c) in expansion {
                out.push(exps, b.chi as i64, m * c)?;
            }
        }
        Ok(out)
    }

    /// Parses the text form (see module docs) against `ring`.
    pub fn parse(text: &str, ring: &RingDescriptor) -> Result<Self> {
        Parser::new(text).parse_class(ring)
    }
}

fn binom_small(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for j in 0..k {
        acc = acc * (n - j) as i64 / (j + 1) as i64;
    }
    acc
}

impl fmt::Display for SplitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0*h({})", vec!["0"; self.ring.factors().len()].join(","));
        }
        for (pos, (k, &m)) in self.terms.iter().enumerate() {
            let exps: Vec<String> = k.exponents.iter().map(|e| e.to_string()).collect();
            let body = format!("{}*h({})", m.abs(), exps.join(","));
            let body = if self.ring.is_equivariant() {
                format!("{body}@{}", k.character)
            } else {
                body
            };
            match (pos, m < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("integer {s} out of range"),
        })
    }

    fn parse_class(&mut self, ring: &RingDescriptor) -> Result<SplitClass> {
        let mut out = SplitClass::new(ring);
        let mut sign = 1;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let term_start = self.pos;
            let (exps, chi, m) = self.parse_term()?;
            if exps.len() != ring.factors().len() {
                return Err(Error::Parse {
                    pos: term_start,
                    msg: format!(
                        "expected {} exponents for {}, got {}",
                        ring.factors().len(),
                        ring,
                        exps.len()
                    ),
                });
            }
            if chi != 0 && !ring.is_equivariant() {
                return Err(Error::Parse {
                    pos: term_start,
                    msg: format!("character @{chi} needs an equivariant ring"),
                });
            }
            out.push(exps, chi, sign * m).map_err(|e| Error::Parse {
                pos: term_start,
                msg: e.to_string(),
            })?;
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(c) => return self.err(format!("unexpected '{}'", c as char)),
            }
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<(Vec<i64>, i64, i64)> {
        let m = if self.peek() == Some(b'h') {
            1
        } else {
            let m = self.int()?;
            self.expect(b'*')?;
            m
        };
        self.expect(b'h')?;
        self.expect(b'(')?;
        let mut exps = Vec::new();
        if self.peek() != Some(b')') {
            loop {
                exps.push(self.int()?);
                if self.peek() == Some(b',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(b')')?;
        let chi = if self.peek() == Some(b'@') {
            self.pos += 1;
            self.int()?
        } else {
            0
        };
        Ok((exps, chi, m))
    }
}
