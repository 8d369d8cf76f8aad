//! Sparse multivariate polynomials over `Q(i)`.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! lexicographic, so the leading term is always the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::GqMatrix;
use crate::exactnum::Gq;

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then the larger exponent in the earliest differing variable wins.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    /// Concatenation `(self, other)` as a monomial in `n + m` variables.
    pub fn concat(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Splits after the first `n` variables.
    pub fn split_at(&self, n: usize) -> (Monomial, Monomial) {
        (Monomial(self.0[..n].to_vec()), Monomial(self.0[n..].to_vec()))
    }

    pub fn with_extra_vars(&self, extra: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(self.0.len() + extra, 0);
        Monomial(e)
    }

    /// All monomials in `nvars` variables of total degree exactly `d`, ascending.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if cur.len() + 1 == nvars {
                cur.push(left);
                out.push(Monomial(cur.clone()));
                cur.pop();
                return;
            }
            for e in 0..=left {
                cur.push(e);
                rec(nvars, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(nvars, d, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "z{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Sparse polynomial; the zero polynomial has no terms but keeps `nvars`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Gq>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Gq) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Gq::one())
    }

    /// The coordinate function `z_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Gq::one());
        p
    }

    pub fn monomial(m: Monomial, c: Gq) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; repeated monomials add up.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Gq)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VariableCountMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Gq)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Gq {
        self.terms.get(m).cloned().unwrap_or_else(Gq::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Gq)> {
        self.terms.last_key_value()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True iff all terms share one total degree (vacuously for zero).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Gq) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_nvars(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn poly_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_nvars(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Gq) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-Gq::one())
    }

    /// Coefficient-wise conjugate: `p̄(z) := conj(p(z̄))`.
    pub fn conj_coeffs(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.poly_mul(self).expect("same nvars");
        }
        acc
    }

    pub fn poly_eval(&self, point: &[Gq]) -> Result<Gq> {
        if point.len() != self.nvars {
            return Err(Error::VariableCountMismatch { expected: self.nvars, found: point.len() });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| (0..e).fold(acc, |a, _| &a * x))
            })
            .sum())
    }

    /// Same polynomial viewed in `nvars + extra` variables (new ones last).
    pub fn with_extra_vars(&self, extra: usize) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars + extra,
            terms: self.terms.iter().map(|(m, c)| (m.with_extra_vars(extra), c.clone())).collect(),
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut ex = m.0.clone();
            ex[i] -= 1;
            out.add_term(Monomial(ex), c.scale(&crate::exactnum::int(e as i64)));
        }
        out
    }

    /// Single-divisor multivariate division under graded-lex order.
    ///
    /// Returns `(q, r)` with `self = q·divisor + r` and no term of `r`
    /// divisible by the leading monomial of `divisor`. Since a single
    /// polynomial is a Gröbner basis of the ideal it generates, `r = 0`
    /// exactly when `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        self.check_nvars(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut p = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        let mut r = MultiPoly::zero(self.nvars);
        while let Some((m, c)) = p.terms.pop_last() {
            if lm.divides(&m) {
                let tm = lm.quotient_of(&m);
                let tc = &c * &lc_inv;
                for (dm, dc) in divisor.terms.iter().rev().skip(1) {
                    p.add_term(tm.mul(dm), -&(&tc * dc));
                }
                q.add_term(tm, tc);
            } else {
                r.add_term(m, c);
            }
        }
        Ok((q, r))
    }

    /// `p(S·u)` for `S` with `nvars` rows; the result has `S.cols()` variables.
    pub fn restrict_linear(&self, s: &GqMatrix) -> Result<MultiPoly> {
        let linear = linear_forms(s, self.nvars)?;
        let mut cache = PowerCache::new(&linear);
        let mut out = MultiPoly::zero(s.cols());
        for (m, c) in &self.terms {
            let t = cache.monomial(m).scale(c);
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }
}

/// The rows of `S` as linear forms `z_i = Σ_j S[i][j]·u_j`.
pub(crate) fn linear_forms(s: &GqMatrix, nvars: usize) -> Result<Vec<MultiPoly>> {
    if s.rows() != nvars {
        return Err(Error::ShapeMismatch(format!(
            "substitution matrix has {} rows, polynomial has {} variables",
            s.rows(),
            nvars
        )));
    }
    let m = s.cols();
    Ok((0..nvars)
        .map(|i| {
            let mut l = MultiPoly::zero(m);
            for j in 0..m {
                l.add_term(Monomial::var(m, j), s[(i, j)].clone());
            }
            l
        })
        .collect())
}

/// Memoized products of powers of substituted linear forms.
pub(crate) struct PowerCache<'a> {
    linear: &'a [MultiPoly],
    powers: Vec<Vec<MultiPoly>>,
    monos: std::collections::HashMap<Monomial, MultiPoly>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(linear: &'a [MultiPoly]) -> Self {
        PowerCache { linear, powers: vec![Vec::new(); linear.len()], monos: Default::default() }
    }

    fn power(&mut self, i: usize, e: u32) -> MultiPoly {
        let nv = self.linear[i].nvars();
        let list = &mut self.powers[i];
        if list.is_empty() {
            list.push(MultiPoly::one(nv));
        }
        while list.len() <= e as usize {
            let next = list.last().unwrap().poly_mul(&self.linear[i]).expect("same nvars");
            list.push(next);
        }
        list[e as usize].clone()
    }

    pub(crate) fn monomial(&mut self, m: &Monomial) -> MultiPoly {
        if let Some(p) = self.monos.get(m) {
            return p.clone();
        }
        let nv = self.linear.first().map_or(0, MultiPoly::nvars);
        let mut acc = MultiPoly::one(nv);
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                acc = acc.poly_mul(&self.power(i, e)).expect("same nvars");
            }
        }
        self.monos.insert(m.clone(), acc.clone());
        acc
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*{m:?}")?;
        }
        Ok(())
    }
}

/// Homogenizes a tuple to the common degree `d = max deg` with a new last
/// variable; setting it to one recovers the input.
pub fn homogenize(tuple: &[MultiPoly]) -> Result<(Vec<MultiPoly>, u32)> {
    let d = tuple.iter().filter_map(MultiPoly::degree).max().ok_or(Error::EmptyTuple)?;
    let n = tuple[0].nvars();
    if let Some(p) = tuple.iter().find(|p| p.nvars() != n) {
        return Err(Error::VariableCountMismatch { expected: n, found: p.nvars() });
    }
    let out = tuple
        .iter()
        .map(|p| {
            let mut h = MultiPoly::zero(n + 1);
            for (m, c) in p.terms() {
                let mut e = m.exponents().to_vec();
                e.push(d - m.degree());
                h.add_term(Monomial(e), c.clone());
            }
            h
        })
        .collect();
    Ok((out, d))
}

/// Sets the last variable to one and drops it.
pub fn dehomogenize(p: &MultiPoly) -> MultiPoly {
    let n = p.nvars().saturating_sub(1);
    let mut out = MultiPoly::zero(n);
    for (m, c) in p.terms() {
        out.add_term(Monomial(m.exponents()[..n].to_vec()), c.clone());
    }
    out
}

/// Coefficient matrix of a tuple: row `j` holds the coefficients of
/// `tuple[j]` over the returned (sorted) monomial list.
pub fn coefficient_matrix(tuple: &[MultiPoly]) -> (GqMatrix, Vec<Monomial>) {
    let mut monos: Vec<Monomial> = tuple.iter().flat_map(|p| p.terms.keys().cloned()).collect();
    monos.sort();
    monos.dedup();
    let mut m = GqMatrix::zeros(tuple.len(), monos.len());
    for (j, p) in tuple.iter().enumerate() {
        for (k, mono) in monos.iter().enumerate() {
            if let Some(c) = p.terms.get(mono) {
                m[(j, k)] = c.clone();
            }
        }
    }
    (m, monos)
}

/// `Σ_j coeffs[j]·tuple[j]`.
pub fn linear_combination(coeffs: &[Gq], tuple: &[MultiPoly], nvars: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(nvars);
    for (c, p) in coeffs.iter().zip(tuple) {
        if c.is_zero() {
            continue;
        }
        for (m, pc) in p.terms() {
            out.add_term(m.clone(), c * pc);
        }
    }
    out
}
