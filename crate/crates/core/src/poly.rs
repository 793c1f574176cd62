//! Multivariate polynomials over `F_p` and a budgeted Buchberger algorithm.
//!
//! Terms are kept sorted in descending degrevlex order. The Gröbner code is
//! deliberately plain: S-pairs are processed first-in first-out, pairs with
//! coprime leading monomials are skipped, and the result is reduced and
//! monic, so the output is deterministic for a given generator list.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use crate::arith::{inv_mod, is_prime};
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

/// Degree-reverse-lexicographic comparison.
pub fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    nvars: usize,
    p: u64,
    terms: Vec<(Exponents, u64)>,
}

impl FpPoly {
    pub fn zero(nvars: usize, p: u64) -> Self {
        Self {
            nvars,
            p,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, p: u64, c: i64) -> Self {
        Self::monomial(nvars, p, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, p: u64, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, p, e, 1)
    }

    pub fn monomial(nvars: usize, p: u64, exps: Exponents, c: i64) -> Self {
        Self::from_terms(nvars, p, [(exps, c)])
    }

    pub fn from_terms(
        nvars: usize,
        p: u64,
        terms: impl IntoIterator<Item = (Exponents, i64)>,
    ) -> Self {
        let mut out = Self::zero(nvars, p);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            out.add_term(e, c.rem_euclid(p as i64) as u64);
        }
        out
    }

    fn add_term(&mut self, e: Exponents, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        match self.terms.binary_search_by(|(x, _)| degrevlex(&e, x)) {
            Ok(i) => {
                let v = (self.terms[i].1 + c) % self.p;
                if v == 0 {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = v;
                }
            }
            Err(i) => self.terms.insert(i, (e, c)),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[(Exponents, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Exponents, u64)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let mut out = Self::zero(self.nvars, self.p);
        if c == 0 {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.clone(), v * c % self.p))
            .collect();
        out
    }

    pub fn mul_term(&self, e: &[u32], c: u64) -> Self {
        let c = c % self.p;
        let mut out = Self::zero(self.nvars, self.p);
        if c == 0 {
            return out;
        }
        // Multiplying by a monomial preserves the order.
        out.terms = self
            .terms
            .iter()
            .map(|(x, v)| {
                (
                    x.iter().zip(e).map(|(a, b)| a + b).collect(),
                    v * c % self.p,
                )
            })
            .collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.p);
        for (e, c) in &other.terms {
            out = out.add(&self.mul_term(e, *c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(self.nvars, self.p, 1), |acc, _| {
            acc.mul(self)
        })
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(inv_mod(*c, self.p)),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.p);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c * (e[i] as u64 % self.p));
        }
        out
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.nvars);
        let p = self.p;
        self.terms.iter().fold(0, |acc, (e, c)| {
            let m = e.iter().zip(point).fold(*c, |m, (k, x)| {
                m * crate::arith::pow_mod(*x, *k as u64, p) % p
            });
            (acc + m) % p
        })
    }

    /// Substitutes `x_i ↦ images[i]` (all in a common target ring).
    pub fn compose(&self, images: &[FpPoly]) -> FpPoly {
        assert_eq!(images.len(), self.nvars);
        let target = &images[0];
        let mut out = FpPoly::zero(target.nvars, self.p);
        for (e, c) in &self.terms {
            let mut term = FpPoly::constant(target.nvars, self.p, *c as i64);
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&img.pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-embeds into `nvars` variables, placing variable `i` at `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> FpPoly {
        let mut out = FpPoly::zero(nvars, self.p);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, *c);
        }
        out
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{i}")
                        } else {
                            format!("x{i}^{k}")
                        }
                    })
                    .collect();
                match (mono.is_empty(), *c) {
                    (true, c) => c.to_string(),
                    (false, 1) => mono.join("*"),
                    (false, c) => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Resource caps for Buchberger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroebnerBudget {
    pub max_pairs: usize,
    pub max_basis: usize,
    pub max_terms: usize,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        Self {
            max_pairs: 20_000,
            max_basis: 500,
            max_terms: 50_000,
        }
    }
}

impl GroebnerBudget {
    /// Defaults overridden by `BOTT_GROEBNER_MAX_PAIRS`, `BOTT_GROEBNER_MAX_BASIS`
    /// and `BOTT_GROEBNER_MAX_TERMS` when set.
    pub fn from_env() -> Self {
        let mut b = Self::default();
        let read = |name: &str| {
            std::env::var(name)
                .ok()
                .and_then(|v| v.parse::<usize>().ok())
        };
        if let Some(v) = read("BOTT_GROEBNER_MAX_PAIRS") {
            b.max_pairs = v;
        }
        if let Some(v) = read("BOTT_GROEBNER_MAX_BASIS") {
            b.max_basis = v;
        }
        if let Some(v) = read("BOTT_GROEBNER_MAX_TERMS") {
            b.max_terms = v;
        }
        b
    }
}

/// Full reduction of `f` by `basis`: the remainder has no term divisible by
/// any leading monomial.
pub fn normal_form(f: &FpPoly, basis: &[FpPoly]) -> FpPoly {
    normal_form_budgeted(f, basis, usize::MAX).expect("unbounded reduction")
}

fn normal_form_budgeted(f: &FpPoly, basis: &[FpPoly], max_terms: usize) -> Result<FpPoly> {
    let p = f.p;
    let mut rem = FpPoly::zero(f.nvars, p);
    let mut g = f.clone();
    while let Some((e, c)) = g.terms.first().cloned() {
        if g.terms.len() > max_terms {
            return Err(Error::BudgetExceeded(format!(
                "intermediate polynomial with {} terms",
                g.terms.len()
            )));
        }
        let divisor = basis
            .iter()
            .find(|b| b.leading().map(|(lm, _)| divides(lm, &e)).unwrap_or(false));
        match divisor {
            Some(b) => {
                let (lm, lc) = b.leading().expect("nonzero divisor");
                let shift: Exponents = e.iter().zip(lm).map(|(x, y)| x - y).collect();
                let factor = c * inv_mod(*lc, p) % p;
                g = g.sub(&b.mul_term(&shift, factor));
            }
            None => {
                rem.add_term(e, c);
                g.terms.remove(0);
            }
        }
    }
    Ok(rem)
}

fn s_polynomial(f: &FpPoly, g: &FpPoly) -> FpPoly {
    let (lf, cf) = f.leading().expect("nonzero");
    let (lg, cg) = g.leading().expect("nonzero");
    let l = lcm(lf, lg);
    let p = f.p;
    let mf: Exponents = l.iter().zip(lf).map(|(a, b)| a - b).collect();
    let mg: Exponents = l.iter().zip(lg).map(|(a, b)| a - b).collect();
    f.mul_term(&mf, inv_mod(*cf, p))
        .sub(&g.mul_term(&mg, inv_mod(*cg, p)))
}

/// Reduced, monic degrevlex Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(gens: &[FpPoly], budget: GroebnerBudget) -> Result<Vec<FpPoly>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let (nvars, p) = (first.nvars, first.p);
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if gens.iter().any(|g| g.nvars != nvars || g.p != p) {
        return Err(Error::InvalidArgument(
            "generators live in different rings".into(),
        ));
    }
    let mut basis: Vec<FpPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(FpPoly::monic)
        .collect();
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push_back((i, j));
        }
    }
    let mut processed = 0usize;
    while let Some((i, j)) = pairs.pop_front() {
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::BudgetExceeded(format!(
                "more than {} S-pairs",
                budget.max_pairs
            )));
        }
        let (li, _) = basis[i].leading().expect("nonzero");
        let (lj, _) = basis[j].leading().expect("nonzero");
        if li.iter().zip(lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = normal_form_budgeted(&s, &basis, budget.max_terms)?;
        if !r.is_zero() {
            basis.push(r.monic());
            if basis.len() > budget.max_basis {
                return Err(Error::BudgetExceeded(format!(
                    "basis grew beyond {} elements",
                    budget.max_basis
                )));
            }
            let k = basis.len() - 1;
            for i in 0..k {
                pairs.push_back((i, k));
            }
        }
    }
    Ok(reduce_basis(basis))
}

fn reduce_basis(mut basis: Vec<FpPoly>) -> Vec<FpPoly> {
    // Drop elements whose leading monomial is divisible by another's.
    let mut keep: Vec<FpPoly> = Vec::new();
    basis.sort_by(|a, b| degrevlex(&a.leading().unwrap().0, &b.leading().unwrap().0));
    for g in basis {
        let lm = g.leading().unwrap().0.clone();
        if !keep.iter().any(|k| divides(&k.leading().unwrap().0, &lm)) {
            keep.push(g);
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<FpPoly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let (lm, _) = keep[i].leading().unwrap().clone();
        let tail = FpPoly {
            nvars: keep[i].nvars,
            p: keep[i].p,
            terms: keep[i].terms[1..].to_vec(),
        };
        let mut g = normal_form(&tail, &others);
        g.add_term(lm, 1);
        out.push(g);
    }
    out
}

/// `f ∈ (basis)` for a Gröbner basis.
pub fn is_member(f: &FpPoly, basis: &[FpPoly]) -> bool {
    normal_form(f, basis).is_zero()
}

/// `dim_{F_p} F_p[x]/I` for a zero-dimensional ideal given by a Gröbner basis.
pub fn quotient_dimension(basis: &[FpPoly]) -> Result<u64> {
    let Some(first) = basis.first() else {
        return Err(Error::InvalidArgument(
            "zero ideal is not zero-dimensional".into(),
        ));
    };
    let nvars = first.nvars;
    let leads: Vec<&Exponents> = basis.iter().map(|g| &g.leading().unwrap().0).collect();
    // Each variable needs a pure-power leading monomial.
    let mut bounds = Vec::with_capacity(nvars);
    for i in 0..nvars {
        let pure = leads
            .iter()
            .filter(|e| e.iter().enumerate().all(|(j, &k)| j == i || k == 0))
            .map(|e| e[i])
            .min();
        match pure {
            Some(k) => bounds.push(k),
            None => {
                return Err(Error::InvalidArgument(format!(
                    "ideal is not zero-dimensional (no pure power of x{i})"
                )))
            }
        }
    }
    let mut count = 0u64;
    let mut cur = vec![0u32; nvars];
    loop {
        if !leads.iter().any(|l| divides(l, &cur)) {
            count += 1;
        }
        let mut j = nvars;
        loop {
            if j == 0 {
                return Ok(count);
            }
            j -= 1;
            cur[j] += 1;
            if cur[j] < bounds[j] {
                break;
            }
            cur[j] = 0;
        }
    }
}

/// Parses polynomials like `y^2 - x^3 - x` or `2*x*y + 1` over `F_p`.
/// Variable names are identifiers; the variable order is `names`.
pub fn parse_poly(text: &str, names: &[String], p: u64) -> Result<FpPoly> {
    let nvars = names.len();
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut out = FpPoly::zero(nvars, p);
    let skip = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let number = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos)
            .then(|| text[start..*pos].parse::<u64>().ok())
            .flatten()
    };
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };
    let mut first = true;
    loop {
        skip(&mut pos);
        if pos >= bytes.len() {
            if first {
                return Err(err(pos, "empty polynomial"));
            }
            break;
        }
        let mut sign = 1i64;
        match bytes[pos] {
            b'+' => {
                pos += 1;
            }
            b'-' => {
                sign = -1;
                pos += 1;
            }
            _ if !first => return Err(err(pos, "expected '+' or '-'")),
            _ => {}
        }
        first = false;
        let mut coeff: u64 = 1;
        let mut exps = vec![0u32; nvars];
        let mut factors = 0;
        loop {
            skip(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            let c = bytes[pos];
            if c.is_ascii_digit() {
                let n = number(&mut pos).ok_or_else(|| err(pos, "bad number"))?;
                coeff = coeff * (n % p) % p;
            } else if c.is_ascii_alphabetic() || c == b'_' {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                let name = &text[start..pos];
                let idx = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| err(start, &format!("unknown variable {name}")))?;
                skip(&mut pos);
                let mut k = 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip(&mut pos);
                    k = number(&mut pos).ok_or_else(|| err(pos, "expected exponent"))? as u32;
                }
                exps[idx] += k;
            } else {
                return Err(err(pos, &format!("unexpected '{}'", c as char)));
            }
            factors += 1;
            skip(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                continue;
            }
            break;
        }
        if factors == 0 {
            return Err(err(pos, "expected a term"));
        }
        let c = if sign < 0 { (p - coeff) % p } else { coeff };
        out.add_term(exps, c);
    }
    Ok(out)
}

/// Variable names appearing in a polynomial string, sorted.
pub fn variable_names(text: &str) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() || bytes[i] == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let n = text[start..i].to_string();
            if !names.contains(&n) {
                names.push(n);
            }
        } else {
            i += 1;
        }
    }
    names.sort();
    names
}
