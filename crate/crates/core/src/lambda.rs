//! Adams operations ψ^k, Bott classes θ^k and λ-operations on split classes.
//!
//! All three are determined by their values on line classes:
//! `ψ^k(L) = L^k`, `θ^k(L) = 1 + L + ... + L^{k-1}`, `λ_t(L) = 1 + L t`.
//! ψ^k extends additively, θ^k and λ_t multiplicatively. Negative
//! multiplicities in θ^k are handled by inverting `θ^k(L)`, which has rank
//! `k` and is therefore a unit in `K_0[1/k]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kring::KElement;
use crate::scalar::Scalar;
use crate::split::{LineKey, SplitClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperationKind {
    Adams,
    Theta,
    LambdaI,
    LambdaMinusOne,
}

/// Names an operation and its degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationTag {
    kind: OperationKind,
    degree: u32,
}

impl OperationTag {
    pub fn new(kind: OperationKind, degree: u32) -> Result<Self> {
        let ok = match kind {
            OperationKind::Adams => degree >= 1,
            OperationKind::Theta => degree >= 2,
            OperationKind::LambdaI | OperationKind::LambdaMinusOne => true,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "degree {degree} not allowed for {kind:?}"
            )));
        }
        Ok(Self { kind, degree })
    }

    pub fn kind(&self) -> OperationKind {
        self.kind
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn apply<S: Scalar>(&self, x: &SplitClass) -> Result<KElement<S>> {
        match self.kind {
            OperationKind::Adams => adams(self.degree, x),
            OperationKind::Theta => theta(self.degree, x),
            OperationKind::LambdaI => lambda_op(self.degree, x),
            OperationKind::LambdaMinusOne => lambda_minus_one(x),
        }
    }
}

fn line_power<S: Scalar>(x: &SplitClass, key: &LineKey, j: i64) -> Result<KElement<S>> {
    let exps: Vec<i64> = key.exponents.iter().map(|a| a * j).collect();
    KElement::line_class(x.ring(), &exps, Some(key.character as i64 * j))
}

/// ψ^k: each term `m · h^a σ^c` contributes `m · h^{ka} σ^{kc}`.
pub fn adams<S: Scalar>(k: u32, x: &SplitClass) -> Result<KElement<S>> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "Adams degree must be at least 1".into(),
        ));
    }
    let mut out = KElement::zero(x.ring());
    for (key, m) in x.terms() {
        out = &out + &line_power::<S>(x, key, k as i64)?.scale(&S::from_i64(m));
    }
    Ok(out)
}

/// `θ^k(L) = 1 + L + ... + L^{k-1}` for a single line.
fn theta_line<S: Scalar>(k: u32, x: &SplitClass, key: &LineKey) -> Result<KElement<S>> {
    let mut out = KElement::zero(x.ring());
    for j in 0..k as i64 {
        out = &out + &line_power::<S>(x, key, j)?;
    }
    Ok(out)
}

/// The Bott class θ^k, multiplicative over the presentation. Negative
/// multiplicities need `Z[1/k]` coefficients (`k` prime).
pub fn theta<S: Scalar>(k: u32, x: &SplitClass) -> Result<KElement<S>> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "Bott degree must be at least 2".into(),
        ));
    }
    let mut out = KElement::one(x.ring());
    for (key, m) in x.terms() {
        let base = theta_line::<S>(k, x, key)?;
        let factor = if m > 0 {
            base.pow(m as u32)
        } else {
            base.invert(k)?.pow(m.unsigned_abs() as u32)
        };
        out = &out * &factor;
    }
    Ok(out)
}

/// `θ^k(x)^{-1}` in `K_0[1/k]`.
pub fn theta_inverse<S: Scalar>(k: u32, x: &SplitClass) -> Result<KElement<S>> {
    if x.ring().inverted_prime() != Some(k) {
        return Err(Error::WrongInvertedPrime {
            expected: k,
            found: x.ring().inverted_prime(),
        });
    }
    theta::<S>(k, x)?.invert(k)
}

fn series_mul<S: Scalar>(a: &[KElement<S>], b: &[KElement<S>]) -> Vec<KElement<S>> {
    let n = a.len();
    let ring = a[0].ring().clone();
    let mut out = vec![KElement::zero(&ring); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n - i {
            out[i + j] = &out[i + j] + &(&a[i] * &b[j]);
        }
    }
    out
}

/// Coefficients `λ^0, ..., λ^degree` of `λ_t(x) = Π (1 + L t)^m`, with
/// `(1 + L t)^{-1} = Σ (-L)^j t^j` for negative multiplicities.
pub fn lambda_series<S: Scalar>(x: &SplitClass, degree: u32) -> Result<Vec<KElement<S>>> {
    let ring = x.ring();
    let n = degree as usize + 1;
    let mut acc = vec![KElement::zero(ring); n];
    acc[0] = KElement::one(ring);
    for (key, m) in x.terms() {
        let line = line_power::<S>(x, key, 1)?;
        let mut factor = vec![KElement::zero(ring); n];
        if m > 0 {
            factor[0] = KElement::one(ring);
            if n > 1 {
                factor[1] = line.clone();
            }
        } else {
            let neg = -&line;
            let mut p = KElement::one(ring);
            for f in factor.iter_mut() {
                *f = p.clone();
                p = &p * &neg;
            }
        }
        for _ in 0..m.unsigned_abs() {
            acc = series_mul(&acc, &factor);
        }
    }
    Ok(acc)
}

/// λ^i(x).
pub fn lambda_op<S: Scalar>(i: u32, x: &SplitClass) -> Result<KElement<S>> {
    let mut s = lambda_series(x, i)?;
    Ok(s.pop().expect("series has degree + 1 entries"))
}

/// `λ_{-1}(x) = Σ (-1)^i λ^i(x) = Π (1 - L)^m` for an effective presentation.
pub fn lambda_minus_one<S: Scalar>(x: &SplitClass) -> Result<KElement<S>> {
    if !x.is_effective() {
        return Err(Error::NonEffective(x.to_string()));
    }
    let ring = x.ring();
    let mut out = KElement::one(ring);
    for (key, m) in x.terms() {
        let factor = &KElement::one(ring) - &line_power::<S>(x, key, 1)?;
        out = &out * &factor.pow(m as u32);
    }
    Ok(out)
}
