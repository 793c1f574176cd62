//! The truncated symmetric algebra `τ(E) = Sym(E) / J_E` over `F_p`.
//!
//! For a free module with basis `e_1, ..., e_r`, `J_E` is generated by
//! `e_1^p, ..., e_r^p`, so `τ(E)` has the monomial basis `e^i` with every
//! `i_j < p`. Multiplication adds exponents and vanishes as soon as one
//! coordinate reaches `p`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::arith::{binomial_mod, is_prime};
use crate::error::{Error, Result};
use crate::kring::KElement;
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::split::SplitClass;

/// Largest basis this module will enumerate.
pub const MAX_BASIS: u64 = 1 << 20;

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauBasis {
    pub rank: u32,
    pub prime: u32,
    pub monomials: Vec<Monomial>,
    pub grading: Vec<u32>,
}

fn check_prime(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

/// All exponent vectors in `{0, ..., p-1}^r`, in lexicographic order.
pub(crate) fn exponent_box(r: u32, p: u32) -> Result<Vec<Monomial>> {
    let size = (p as u64).checked_pow(r).filter(|&s| s <= MAX_BASIS);
    let Some(size) = size else {
        return Err(Error::InvalidArgument(format!(
            "{p}^{r} basis elements exceed the budget"
        )));
    };
    let mut out = Vec::with_capacity(size as usize);
    let mut cur = vec![0u32; r as usize];
    loop {
        out.push(cur.clone());
        let mut j = r as usize;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            cur[j] += 1;
            if cur[j] < p {
                break;
            }
            cur[j] = 0;
        }
    }
}

/// The monomial basis of `τ(E)` for `E` free of rank `r`.
pub fn tau_basis(r: u32, p: u32) -> Result<TauBasis> {
    check_prime(p)?;
    let monomials = exponent_box(r, p)?;
    let grading = monomials.iter().map(|m| m.iter().sum()).collect();
    Ok(TauBasis {
        rank: r,
        prime: p,
        monomials,
        grading,
    })
}

impl TauBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Dimension of each graded piece, degree 0 through `r(p-1)`.
    pub fn graded_dims(&self) -> Vec<u64> {
        let top = self.rank * (self.prime - 1);
        let mut dims = vec![0u64; top as usize + 1];
        for &d in &self.grading {
            dims[d as usize] += 1;
        }
        dims
    }
}

/// Product of two basis monomials, `None` when it lands in `J_E`.
pub fn tau_multiply(a: &[u32], b: &[u32], p: u32) -> Option<Monomial> {
    assert_eq!(a.len(), b.len(), "monomials of different rank");
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let s = x + y;
            (s < p).then_some(s)
        })
        .collect()
}

pub fn tau_graded_dims(r: u32, p: u32) -> Result<Vec<u64>> {
    Ok(tau_basis(r, p)?.graded_dims())
}

/// `τ(E)` with `F_p` coefficients: elements are sparse maps monomial → coefficient.
#[derive(Debug, Clone)]
pub struct TauAlgebra {
    basis: TauBasis,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TauElement {
    coeffs: BTreeMap<Monomial, u32>,
}

impl TauElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<Monomial, u32> {
        &self.coeffs
    }
}

impl TauAlgebra {
    pub fn new(r: u32, p: u32) -> Result<Self> {
        Ok(Self {
            basis: tau_basis(r, p)?,
        })
    }

    pub fn basis(&self) -> &TauBasis {
        &self.basis
    }

    fn p(&self) -> u32 {
        self.basis.prime
    }

    pub fn one(&self) -> TauElement {
        self.monomial(vec![0; self.basis.rank as usize], 1)
    }

    pub fn monomial(&self, m: Monomial, c: u32) -> TauElement {
        let mut out = TauElement::default();
        let c = c % self.p();
        if c != 0 && m.iter().all(|&e| e < self.p()) {
            out.coeffs.insert(m, c);
        }
        out
    }

    /// `Σ a_i e_i`.
    pub fn linear_form(&self, a: &[u32]) -> TauElement {
        let r = self.basis.rank as usize;
        let mut out = TauElement::default();
        for (i, &c) in a.iter().enumerate() {
            let mut m = vec![0; r];
            m[i] = 1;
            out = self.add(&out, &self.monomial(m, c));
        }
        out
    }

    pub fn add(&self, x: &TauElement, y: &TauElement) -> TauElement {
        let p = self.p();
        let mut out = x.clone();
        for (m, &c) in &y.coeffs {
            let v = (out.coeffs.get(m).copied().unwrap_or(0) + c) % p;
            if v == 0 {
                out.coeffs.remove(m);
            } else {
                out.coeffs.insert(m.clone(), v);
            }
        }
        out
    }

    pub fn mul(&self, x: &TauElement, y: &TauElement) -> TauElement {
        let p = self.p();
        let mut out = TauElement::default();
        for (a, &ca) in &x.coeffs {
            for (b, &cb) in &y.coeffs {
                if let Some(m) = tau_multiply(a, b, p) {
                    let term = self.monomial(m, ((ca as u64 * cb as u64) % p as u64) as u32);
                    out = self.add(&out, &term);
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &TauElement, e: u32) -> TauElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }
}

/// Checks `τ(E' ⊕ E'') ≅ τ(E') ⊗ τ(E'')` on bases: the split of exponent
/// vectors is a degree-preserving bijection compatible with every basis
/// product, and every linear form has vanishing p-th power (freshman's dream).
pub fn tau_sum_isomorphism_check(r1: u32, r2: u32, p: u32) -> Result<VerificationReport> {
    let id = format!("tau-sum-r{r1}-r{r2}-p{p}");
    let total = tau_basis(r1 + r2, p)?;
    let left = tau_basis(r1, p)?;
    let right = tau_basis(r2, p)?;
    let split = |m: &[u32]| (m[..r1 as usize].to_vec(), m[r1 as usize..].to_vec());

    let mut report =
        VerificationReport::compare(&id, json!(total.len()), json!(left.len() * right.len()));

    let mut seen = std::collections::BTreeSet::new();
    for (m, &deg) in total.monomials.iter().zip(&total.grading) {
        let (a, b) = split(m);
        let d: u32 = a.iter().sum::<u32>() + b.iter().sum::<u32>();
        if !left.monomials.contains(&a) || !right.monomials.contains(&b) || d != deg {
            return Ok(report.require(false, format!("monomial {m:?} does not split")));
        }
        seen.insert((a, b));
    }
    report = report.require(
        seen.len() == left.len() * right.len(),
        "splitting map is not a bijection",
    );

    for u in &total.monomials {
        for v in &total.monomials {
            let whole = tau_multiply(u, v, p).map(|m| split(&m));
            let (u1, u2) = split(u);
            let (v1, v2) = split(v);
            let parts = match (tau_multiply(&u1, &v1, p), tau_multiply(&u2, &v2, p)) {
                (Some(x), Some(y)) => Some((x, y)),
                _ => None,
            };
            if whole != parts {
                return Ok(report.require(
                    false,
                    format!("product {u:?} * {v:?} differs: {whole:?} vs {parts:?}"),
                ));
            }
        }
    }

    let middle_ok = (1..p).all(|i| binomial_mod(p as u64, i as u64, p as u64) == 0);
    report = report.require(middle_ok, "middle binomial coefficient nonzero mod p");

    // (Σ a_i e_i)^p = Σ a_i^p e_i^p = 0 in τ for every linear form.
    let r = r1 + r2;
    if (p as u64).pow(r) <= 4096 {
        let alg = TauAlgebra::new(r, p)?;
        for a in exponent_box(r, p)? {
            let x = alg.linear_form(&a);
            if !alg.pow(&x, p).is_zero() {
                return Ok(report.require(false, format!("p-th power of form {a:?} is nonzero")));
            }
        }
    }
    Ok(report.with_trace("graded_dims", json!(total.graded_dims())))
}

/// The class of `τ(E)` as a sum of lines: each basis monomial `e^i` of
/// `τ(L_1 ⊕ ... ⊕ L_r)` spans the line `L_1^{i_1} ⊗ ... ⊗ L_r^{i_r}`.
pub fn tau_class_lines(e: &SplitClass, p: u32) -> Result<SplitClass> {
    check_prime(p)?;
    if !e.is_effective() {
        return Err(Error::NonEffective(e.to_string()));
    }
    let mut lines = Vec::new();
    for (key, m) in e.terms() {
        for _ in 0..m {
            lines.push(key.clone());
        }
    }
    let ring = e.ring();
    let s = ring.factors().len();
    let mut counts: BTreeMap<(Vec<i64>, i64), i64> = BTreeMap::new();
    for mono in exponent_box(lines.len() as u32, p)? {
        let mut exps = vec![0i64; s];
        let mut chi = 0i64;
        for (line, &i) in lines.iter().zip(&mono) {
            for (acc, a) in exps.iter_mut().zip(&line.exponents) {
                *acc += a * i as i64;
            }
            chi += line.character as i64 * i as i64;
        }
        *counts.entry((exps, chi)).or_default() += 1;
    }
    let mut out = SplitClass::new(ring);
    for ((exps, chi), m) in counts {
        out.push(exps, chi, m)?;
    }
    Ok(out)
}

/// `[τ(E)] ∈ K_0`; equals `θ^p(E)`.
pub fn tau_k0_class<S: Scalar>(e: &SplitClass, p: u32) -> Result<KElement<S>> {
    tau_class_lines(e, p)?.evaluate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kring::{Basis, RingDescriptor};
    use num_rational::BigRational;

    #[test]
    fn basis_examples() {
        let b = tau_basis(1, 3).unwrap();
        assert_eq!(b.monomials, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(b.graded_dims(), vec![1, 1, 1]);
        let b = tau_basis(2, 2).unwrap();
        assert_eq!(
            b.monomials,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let b = tau_basis(0, 5).unwrap();
        assert_eq!(b.monomials, vec![Vec::<u32>::new()]);
        assert!(tau_basis(2, 4).is_err());
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(tau_multiply(&[1, 0], &[1, 0], 2), None);
        for p in [2, 3, 5] {
            assert_eq!(tau_multiply(&[1, 0], &[0, 1], p), Some(vec![1, 1]));
            assert_eq!(tau_multiply(&[p - 1], &[1], p), None);
        }
    }

    #[test]
    fn graded_dims_examples() {
        assert_eq!(tau_graded_dims(1, 5).unwrap(), vec![1; 5]);
        assert_eq!(tau_graded_dims(2, 2).unwrap(), vec![1, 2, 1]);
        assert_eq!(tau_graded_dims(3, 2).unwrap(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn sum_isomorphism_examples() {
        for (r1, r2, p) in [(1, 1, 2), (2, 1, 3), (0, 2, 3), (0, 0, 2)] {
            let rep = tau_sum_isomorphism_check(r1, r2, p).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
        let rep = tau_sum_isomorphism_check(2, 1, 3).unwrap();
        assert_eq!(rep.lhs, Some(json!(27)));
    }

    #[test]
    fn pth_powers_vanish_but_lower_powers_do_not() {
        let alg = TauAlgebra::new(2, 3).unwrap();
        let x = alg.linear_form(&[1, 2]);
        assert!(alg.pow(&x, 3).is_zero());
        assert!(!alg.pow(&x, 2).is_zero());
    }

    #[test]
    fn k0_class_examples() {
        let p1 = RingDescriptor::projective(1);
        for p in [2, 3, 5] {
            let x: KElement<BigRational> = tau_k0_class(&SplitClass::trivial(&p1, 1), p).unwrap();
            assert_eq!(x, KElement::from_integer(&p1, p as i64));
        }
        let h = SplitClass::line(&p1, &[1]).unwrap();
        let x: KElement<BigRational> = tau_k0_class(&h, 2).unwrap();
        let two_plus_t = KElement::from_terms(
            &p1,
            [
                (Basis::unit(1), BigRational::from_integer(2.into())),
                (Basis::new(vec![1], 0), BigRational::from_integer(1.into())),
            ],
        )
        .unwrap();
        assert_eq!(x, two_plus_t);
        let hs = SplitClass::parse("h(1) + h(0)", &p1).unwrap();
        let y: KElement<BigRational> = tau_k0_class(&hs, 2).unwrap();
        assert_eq!(y, two_plus_t.scale(&BigRational::from_integer(2.into())));
        assert!(tau_k0_class::<BigRational>(&hs.negated(), 2).is_err());
    }
}
