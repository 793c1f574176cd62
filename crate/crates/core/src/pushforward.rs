//! Pushforward along `P^n_Y → Y` and the Adams-Riemann-Roch identity.
//!
//! `R f_*` on K_0 only sees Euler characteristics, and on a line bundle
//! `O(a)` of `P^n` that is the polynomial `χ(n, a) = C(n + a, n)`, valid for
//! every integer `a`. In the t-basis, `t^i = (h - 1)^i` pushes forward to the
//! i-th forward difference of `χ(n, ·)` at 0.
//!
//! The identity checked is
//! `ψ^p(R f_* E) = R f_*(θ^p(Ω_f)^{-1} · ψ^p(E))` in `K_0(Y)[1/p]`, for `Y` a
//! point (where ψ^p is the identity) or `P^m` (where ψ^p is `h ↦ h^p`).

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::kring::{Basis, KElement, RingDescriptor};
use crate::lambda::{adams, theta, theta_inverse};
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::split::SplitClass;

/// `χ(P^n, O(a)) = Π_{j=1}^n (a + j) / n!`.
pub fn chi(n: u32, a: i64) -> BigInt {
    binomial(&BigInt::from(a + n as i64), n)
}

/// i-th forward difference of `χ(n, ·)` at 0.
fn chi_difference(n: u32, i: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for j in 0..=i {
        let term = binomial(&BigInt::from(i), j) * chi(n, j as i64);
        if (i - j).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `R f_*` for `P^n → pt`.
pub fn pushforward_point<S: Scalar>(n: u32, x: &KElement<S>) -> Result<S> {
    let ring = x.ring();
    if ring.factors() != [n] {
        return Err(Error::InvalidArgument(format!(
            "expected a class on P^{n}, got {ring}"
        )));
    }
    if ring.is_equivariant() {
        return Err(Error::InvalidArgument(
            "pushforward of an equivariant class".into(),
        ));
    }
    let mut acc = S::zero();
    for (b, c) in x.terms() {
        acc = acc + c.clone() * S::from_bigint(&chi_difference(n, b.idx[0]));
    }
    Ok(acc)
}

/// `R f_*` for the projection `P^m x P^n → P^m`, applied fiberwise.
pub fn pushforward_relative<S: Scalar>(m: u32, n: u32, x: &KElement<S>) -> Result<KElement<S>> {
    let ring = x.ring();
    if ring.factors() != [m, n] {
        return Err(Error::InvalidArgument(format!(
            "expected a class on P^{m}xP^{n}, got {ring}"
        )));
    }
    if ring.is_equivariant() {
        return Err(Error::InvalidArgument(
            "pushforward of an equivariant class".into(),
        ));
    }
    let base = base_ring(ring);
    let weights: Vec<BigInt> = (0..=n).map(|i| chi_difference(n, i)).collect();
    let terms = x.terms().map(|(b, c)| {
        let w = S::from_bigint(&weights[b.idx[1] as usize]);
        (Basis::new(vec![b.idx[0]], 0), c.clone() * w)
    });
    KElement::from_terms(&base, terms)
}

fn base_ring(total: &RingDescriptor) -> RingDescriptor {
    RingDescriptor::new(
        vec![total.factors()[0]],
        total.cyclic_order(),
        total.inverted_prime(),
    )
    .expect("derived from a valid descriptor")
}

/// Pullback `K_0(P^m) → K_0(P^m x P^n)` along the projection.
pub fn pullback_base<S: Scalar>(n: u32, y: &KElement<S>) -> Result<KElement<S>> {
    let ring = y.ring();
    if ring.factors().len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "expected a class on P^m, got {ring}"
        )));
    }
    let total = RingDescriptor::new(
        vec![ring.factors()[0], n],
        ring.cyclic_order(),
        ring.inverted_prime(),
    )?;
    KElement::from_terms(
        &total,
        y.terms()
            .map(|(b, c)| (Basis::new(vec![b.idx[0], 0], b.chi), c.clone())),
    )
}

/// `Ω_{P^n} = (n + 1) h^{-1} - 1` (Euler sequence).
pub fn omega_class(n: u32, ring: &RingDescriptor) -> Result<SplitClass> {
    if ring.factors() != [n] {
        return Err(Error::InvalidArgument(format!(
            "expected P^{n}, got {ring}"
        )));
    }
    SplitClass::from_terms(ring, [(vec![-1], 0, n as i64 + 1), (vec![0], 0, -1)])
}

/// Relative cotangent class of `P^m x P^n → P^m`, in the fiber variable.
pub fn omega_class_relative(m: u32, n: u32, ring: &RingDescriptor) -> Result<SplitClass> {
    if ring.factors() != [m, n] {
        return Err(Error::InvalidArgument(format!(
            "expected P^{m}xP^{n}, got {ring}"
        )));
    }
    SplitClass::from_terms(ring, [(vec![0, -1], 0, n as i64 + 1), (vec![0, 0], 0, -1)])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrParams {
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub p: u32,
    pub bundle: String,
}

/// Both sides of the identity plus the intermediate classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrReport<S> {
    pub params: ArrParams,
    pub lhs: KElement<S>,
    pub rhs: KElement<S>,
    pub equal: bool,
    pub trace: Vec<(String, KElement<S>)>,
    pub notes: Vec<String>,
}

impl<S: Scalar> ArrReport<S> {
    fn new(
        params: ArrParams,
        lhs: KElement<S>,
        rhs: KElement<S>,
        trace: Vec<(String, KElement<S>)>,
        notes: Vec<String>,
    ) -> Self {
        let equal = lhs.checked_sub(&rhs).map(|d| d.is_zero()).unwrap_or(false);
        Self {
            params,
            lhs,
            rhs,
            equal,
            trace,
            notes,
        }
    }

    pub fn case_id(&self) -> String {
        let ArrParams { n, m, p, bundle } = &self.params;
        match m {
            Some(m) => format!("arr-relative-m{m}-n{n}-p{p}[{bundle}]"),
            None => format!("arr-n{n}-p{p}[{bundle}]"),
        }
    }

    pub fn to_verification(&self) -> VerificationReport {
        let mut r =
            VerificationReport::compare(self.case_id(), self.lhs.to_json(), self.rhs.to_json())
                .with_trace(
                    "params",
                    serde_json::to_value(&self.params).expect("params serialize"),
                );
        for (label, v) in &self.trace {
            r = r.with_trace(label.clone(), v.to_json());
        }
        for note in &self.notes {
            r = r.with_trace("note", Value::String(note.clone()));
        }
        r
    }
}

fn localized(ring: &RingDescriptor, p: u32) -> Result<RingDescriptor> {
    match ring.inverted_prime() {
        Some(k) if k == p => Ok(ring.clone()),
        Some(k) => Err(Error::WrongInvertedPrime {
            expected: p,
            found: Some(k),
        }),
        None => ring.clone().with_inverted_prime(p),
    }
}

/// Checks the identity for `P^n → Spec F_p`.
pub fn verify_arr<S: Scalar>(n: u32, p: u32, e: &SplitClass) -> Result<ArrReport<S>> {
    if e.ring().factors() != [n] || e.ring().is_equivariant() {
        return Err(Error::InvalidArgument(format!(
            "bundle must live on P^{n}, got {}",
            e.ring()
        )));
    }
    let ring = localized(e.ring(), p)?;
    let e = e.on_ring(&ring)?;
    let point = RingDescriptor::point().with_inverted_prime(p)?;

    let class: KElement<S> = e.evaluate()?;
    // ψ^p on K_0(pt) = Z is the identity.
    let lhs = KElement::from_terms(&point, [(Basis::unit(0), pushforward_point(n, &class)?)])?;

    let omega = omega_class(n, &ring)?;
    let psi_e: KElement<S> = adams(p, &e)?;
    let theta_omega: KElement<S> = theta(p, &omega)?;
    let theta_inv: KElement<S> = theta_inverse(p, &omega)?;
    let integrand = &theta_inv * &psi_e;
    let rhs = KElement::from_terms(
        &point,
        [(Basis::unit(0), pushforward_point(n, &integrand)?)],
    )?;

    Ok(ArrReport::new(
        ArrParams {
            n,
            m: None,
            p,
            bundle: e.to_string(),
        },
        lhs,
        rhs,
        vec![
            ("E".into(), class),
            ("psi^p(E)".into(), psi_e),
            ("Omega".into(), omega.evaluate()?),
            ("theta^p(Omega)".into(), theta_omega),
            ("theta^p(Omega)^-1".into(), theta_inv),
        ],
        vec!["psi^p acts as the identity on K_0(Spec F_p)".into()],
    ))
}

/// Checks the identity for `P^m x P^n → P^m`.
pub fn verify_arr_relative<S: Scalar>(
    m: u32,
    n: u32,
    p: u32,
    e: &SplitClass,
) -> Result<ArrReport<S>> {
    if e.ring().factors() != [m, n] || e.ring().is_equivariant() {
        return Err(Error::InvalidArgument(format!(
            "bundle must live on P^{m}xP^{n}, got {}",
            e.ring()
        )));
    }
    let ring = localized(e.ring(), p)?;
    let e = e.on_ring(&ring)?;

    let class: KElement<S> = e.evaluate()?;
    let pushed = pushforward_relative(m, n, &class)?;
    let lhs: KElement<S> = adams(p, &SplitClass::from_element(&pushed)?)?;

    let omega = omega_class_relative(m, n, &ring)?;
    let psi_e: KElement<S> = adams(p, &e)?;
    let theta_inv: KElement<S> = theta_inverse(p, &omega)?;
    let rhs = pushforward_relative(m, n, &(&theta_inv * &psi_e))?;

    Ok(ArrReport::new(
        ArrParams {
            n,
            m: Some(m),
            p,
            bundle: e.to_string(),
        },
        lhs,
        rhs,
        vec![
            ("E".into(), class),
            ("Rf_*(E)".into(), pushed),
            ("psi^p(E)".into(), psi_e),
            ("Omega_f".into(), omega.evaluate()?),
            ("theta^p(Omega_f)^-1".into(), theta_inv),
        ],
        vec!["psi^p on K_0(P^m) is h -> h^p".into()],
    ))
}

/// `rank(F^* F_* O) · rank((F_* O)^{-1}) = p^r · p^{-r}` on `K_0(A^r) = Z[1/p]`.
pub fn frobenius_rank_bookkeeping<S: Scalar>(r: u32, p: u32) -> Result<bool> {
    let point = RingDescriptor::point().with_inverted_prime(p)?;
    let degree = KElement::<S>::from_integer(&point, (p as i64).pow(r));
    let inv = degree.invert(p)?;
    Ok((&degree * &inv).is_one() && inv.rank() == S::one() / S::from_i64((p as i64).pow(r)))
}
