//! `C_l`-equivariant classes for a trivial action, and the identity
//! `λ_{-1}(Ω ⊗ H) = θ^l(Ω)` modulo the regular representation.
//!
//! With `C_l` acting trivially, `K_0(C_l, X) = K_0(X) ⊗ Z[σ]/(σ^l - 1)`.
//! For prime `l`, dividing out the ideal generated by the regular
//! representation `N = 1 + σ + ... + σ^{l-1}` leaves `K_0(X)[σ]/(N)`, whose
//! elements are written in the basis `1, σ, ..., σ^{l-2}`.
//!
//! The self-intersection class `Δ^* Δ_* O_X` is not constructed; its value
//! `λ_{-1}(I/I^2)` with `I/I^2 ≅ Ω ⊗ H` is used directly, `H` being the
//! augmentation representation `σ + ... + σ^{l-1}`.

use serde_json::{json, Value};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::kring::{Basis, KElement, RingDescriptor};
use crate::lambda::{lambda_minus_one, theta};
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::split::SplitClass;

/// `Σ_c a_c σ^c` with coefficients in a non-equivariant `K_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRingElement<S> {
    base: RingDescriptor,
    coeffs: Vec<KElement<S>>,
}

fn check_prime_order(l: u32) -> Result<()> {
    if !is_prime(l as u64) {
        return Err(Error::InvalidArgument(format!(
            "cyclic order {l} is not prime"
        )));
    }
    Ok(())
}

impl<S: Scalar> GroupRingElement<S> {
    pub fn from_coeffs(base: &RingDescriptor, coeffs: Vec<KElement<S>>) -> Result<Self> {
        if base.is_equivariant() {
            return Err(Error::InvalidArgument(format!(
                "base ring {base} is already equivariant"
            )));
        }
        check_prime_order(coeffs.len() as u32)?;
        if let Some(c) = coeffs.iter().find(|c| c.ring() != base) {
            return Err(Error::DescriptorMismatch {
                left: base.clone(),
                right: c.ring().clone(),
            });
        }
        Ok(Self {
            base: base.clone(),
            coeffs,
        })
    }

    /// `x · σ^0`.
    pub fn embed(x: &KElement<S>, l: u32) -> Result<Self> {
        let mut coeffs = vec![KElement::zero(x.ring()); l as usize];
        coeffs[0] = x.clone();
        Self::from_coeffs(x.ring(), coeffs)
    }

    /// The regular representation `N = Σ_c σ^c`.
    pub fn regular(base: &RingDescriptor, l: u32) -> Result<Self> {
        Self::from_coeffs(base, vec![KElement::one(base); l as usize])
    }

    /// Splits an equivariant element by character.
    pub fn from_equivariant(x: &KElement<S>) -> Result<Self> {
        let ring = x.ring();
        let l = ring
            .cyclic_order()
            .ok_or_else(|| Error::InvalidArgument(format!("{ring} is not equivariant")))?;
        let base = ring.without_cyclic();
        let mut buckets: Vec<Vec<(Basis, S)>> = vec![Vec::new(); l as usize];
        for (b, c) in x.terms() {
            buckets[b.chi as usize].push((Basis::new(b.idx.clone(), 0), c.clone()));
        }
        let coeffs = buckets
            .into_iter()
            .map(|terms| KElement::from_terms(&base, terms))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(&base, coeffs)
    }

    pub fn to_equivariant(&self) -> Result<KElement<S>> {
        let ring = self.base.clone().with_cyclic_order(self.order())?;
        let mut terms = Vec::new();
        for (chi, c) in self.coeffs.iter().enumerate() {
            for (b, v) in c.terms() {
                terms.push((Basis::new(b.idx.clone(), chi as u32), v.clone()));
            }
        }
        KElement::from_terms(&ring, terms)
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn base(&self) -> &RingDescriptor {
        &self.base
    }

    pub fn coeffs(&self) -> &[KElement<S>] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_coeffs(&self.base, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let l = self.coeffs.len();
        let mut out = vec![KElement::zero(&self.base); l];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[(i + j) % l] = &out[(i + j) % l] + &(a * b);
            }
        }
        Self::from_coeffs(&self.base, out)
    }

    /// Augmentation `σ ↦ 1` followed by the rank.
    pub fn rank(&self) -> S {
        self.coeffs.iter().fold(S::zero(), |acc, c| acc + c.rank())
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.base != other.base || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::DescriptorMismatch {
                left: self.base.clone().with_cyclic_order(self.order())?,
                right: other.base.clone().with_cyclic_order(other.order())?,
            });
        }
        Ok(())
    }
}

/// An element of `K_0(X)[σ]/(1 + σ + ... + σ^{l-1})`, coefficients of
/// `σ^0, ..., σ^{l-2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEqElement<S> {
    base: RingDescriptor,
    order: u32,
    coeffs: Vec<KElement<S>>,
}

impl<S: Scalar> ReducedEqElement<S> {
    pub fn coeffs(&self) -> &[KElement<S>] {
        &self.coeffs
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(KElement::is_zero)
    }

    /// Canonical lift with vanishing `σ^{l-1}` coefficient.
    pub fn lift(&self) -> GroupRingElement<S> {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(KElement::zero(&self.base));
        GroupRingElement {
            base: self.base.clone(),
            coeffs,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(reduce_mod_regular(&self.lift().mul(&other.lift())?))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "l": self.order,
            "coeffs": self.coeffs.iter().map(KElement::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `σ + σ^2 + ... + σ^{l-1}`, the kernel of the sum map `O[C_l] → O`.
pub fn augmentation_rep<S: Scalar>(base: &RingDescriptor, l: u32) -> Result<GroupRingElement<S>> {
    check_prime_order(l)?;
    let mut coeffs = vec![KElement::one(base); l as usize];
    coeffs[0] = KElement::zero(base);
    GroupRingElement::from_coeffs(base, coeffs)
}

/// `E ⊗ rep` for effective `E` and a representation with 0/1 multiplicities:
/// one copy of `L ⊗ σ^c` per line `L` of `E` and character `c` in `rep`.
pub fn tensor_with_rep<S: Scalar>(e: &SplitClass, rep: &GroupRingElement<S>) -> Result<SplitClass> {
    if !e.is_effective() {
        return Err(Error::NonEffective(e.to_string()));
    }
    if e.ring().is_equivariant() || e.ring() != rep.base() {
        return Err(Error::InvalidArgument(format!(
            "bundle ring {} does not match representation base {}",
            e.ring(),
            rep.base()
        )));
    }
    let zero = KElement::zero(rep.base());
    let one = KElement::one(rep.base());
    let mut characters = Vec::new();
    for (c, coeff) in rep.coeffs().iter().enumerate() {
        if *coeff == one {
            characters.push(c as i64);
        } else if *coeff != zero {
            return Err(Error::InvalidArgument(
                "representation must be a sum of distinct characters".into(),
            ));
        }
    }
    let ring = e.ring().clone().with_cyclic_order(rep.order())?;
    let mut out = SplitClass::new(&ring);
    for (key, m) in e.terms() {
        for &c in &characters {
            out.push(key.exponents.clone(), c, m)?;
        }
    }
    Ok(out)
}

/// `Π (1 - L_i σ^{c_i})` as a group-ring element.
pub fn lambda_minus_one_eq<S: Scalar>(x: &SplitClass) -> Result<GroupRingElement<S>> {
    if !x.ring().is_equivariant() {
        return Err(Error::InvalidArgument(format!(
            "{} is not equivariant",
            x.ring()
        )));
    }
    GroupRingElement::from_equivariant(&lambda_minus_one(x)?)
}

/// Imposes `σ^{l-1} = -(1 + σ + ... + σ^{l-2})`.
pub fn reduce_mod_regular<S: Scalar>(x: &GroupRingElement<S>) -> ReducedEqElement<S> {
    let l = x.coeffs.len();
    let top = &x.coeffs[l - 1];
    let coeffs = x.coeffs[..l - 1].iter().map(|c| c - top).collect();
    ReducedEqElement {
        base: x.base.clone(),
        order: l as u32,
        coeffs,
    }
}

/// Compares `λ_{-1}(Ω ⊗ H)` with `θ^l(Ω)` in `K_0(C_l, X)/(N)`.
pub fn verify_appendix_theorem<S: Scalar>(
    omega: &SplitClass,
    l: u32,
) -> Result<VerificationReport> {
    check_prime_order(l)?;
    if omega.ring().is_equivariant() {
        return Err(Error::InvalidArgument(
            "Omega must be a non-equivariant class".into(),
        ));
    }
    if !omega.is_effective() {
        return Err(Error::NonEffective(omega.to_string()));
    }
    let base = omega.ring();
    let h = augmentation_rep::<S>(base, l)?;
    let twisted = tensor_with_rep(omega, &h)?;
    let self_intersection = lambda_minus_one_eq::<S>(&twisted)?;
    let lhs = reduce_mod_regular(&self_intersection);
    let bott: KElement<S> = theta(l, omega)?;
    let rhs = reduce_mod_regular(&GroupRingElement::embed(&bott, l)?);

    let id = format!("self-intersection-l{l}-{base}[{omega}]");
    Ok(
        VerificationReport::compare(id, lhs.to_json(), rhs.to_json())
            .with_trace("Omega", omega.evaluate::<S>()?.to_json())
            .with_trace("Omega(x)H", Value::String(twisted.to_string()))
            .with_trace(
                "lambda_-1(Omega(x)H)",
                self_intersection.to_equivariant()?.to_json(),
            )
            .with_trace("theta^l(Omega)", bott.to_json()),
    )
}
