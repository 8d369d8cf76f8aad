//! Bigraded forms `H(z, z̄) = Σ c_{αβ} z^α z̄^β`.
//!
//! A [`BiForm`] stores the polarized coefficients `c_{αβ}` directly, so the
//! same object is read as `H(z, z̄)` or as `H(x, ȳ)` with independent `x, y`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{congruence_diagonalize, mat_rank, GqMatrix};
use crate::exactnum::{Gq, Rational};
use crate::poly::{linear_forms, Monomial, MultiPoly, PowerCache};

/// Signature `(r, s, t)` of the diagonal form `H_{r,s,t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

impl Signature {
    pub fn new(r: usize, s: usize, t: usize) -> Result<Self> {
        if r + s + t == 0 {
            return Err(Error::InvalidSignature("r + s + t must be at least 1".into()));
        }
        Ok(Signature { r, s, t })
    }

    pub fn dim(&self) -> usize {
        self.r + self.s + self.t
    }

    /// Number of non-null directions, `r + s`.
    pub fn rank(&self) -> usize {
        self.r + self.s
    }

    /// Weight `ε_k ∈ {+1, -1, 0}` of coordinate `k` (zero-based).
    pub fn weight(&self, k: usize) -> i8 {
        if k < self.r {
            1
        } else if k < self.r + self.s {
            -1
        } else {
            0
        }
    }

    pub fn weight_gq(&self, k: usize) -> Gq {
        Gq::from_int(self.weight(k) as i64)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.s, self.t)
    }
}

/// Sparse map `(α, β) → c_{αβ}` with no stored zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiForm {
    nvars: usize,
    coeff: BTreeMap<(Monomial, Monomial), Gq>,
}

impl BiForm {
    pub fn zero(nvars: usize) -> Self {
        BiForm { nvars, coeff: BTreeMap::new() }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Vec<u32>, Gq)>,
    {
        let mut b = Self::zero(nvars);
        for (a, be, c) in terms {
            for e in [&a, &be] {
                if e.len() != nvars {
                    return Err(Error::VariableCountMismatch { expected: nvars, found: e.len() });
                }
            }
            b.add_term(Monomial::new(a), Monomial::new(be), c);
        }
        Ok(b)
    }

    /// `h1(z)·conj(h2(z))`.
    pub fn outer(h1: &MultiPoly, h2: &MultiPoly) -> Result<BiForm> {
        if h1.nvars() != h2.nvars() {
            return Err(Error::VariableCountMismatch { expected: h1.nvars(), found: h2.nvars() });
        }
        let mut b = Self::zero(h1.nvars());
        for (ma, ca) in h1.terms() {
            for (mb, cb) in h2.terms() {
                b.add_term(ma.clone(), mb.clone(), ca * &cb.conj());
            }
        }
        Ok(b)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeff.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &Gq)> {
        self.coeff.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coeff(&self, alpha: &Monomial, beta: &Monomial) -> Gq {
        self.coeff.get(&(alpha.clone(), beta.clone())).cloned().unwrap_or_else(Gq::zero)
    }

    pub fn add_term(&mut self, alpha: Monomial, beta: Monomial, c: Gq) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeff.entry((alpha, beta)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_nvars(&self, other: &BiForm) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &BiForm) -> Result<BiForm> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for ((a, b), c) in &other.coeff {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &BiForm) -> Result<BiForm> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for ((a, b), c) in &other.coeff {
            out.add_term(a.clone(), b.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &BiForm) -> Result<BiForm> {
        self.check_nvars(other)?;
        let mut out = BiForm::zero(self.nvars);
        for ((a1, b1), c1) in &self.coeff {
            for ((a2, b2), c2) in &other.coeff {
                out.add_term(a1.mul(a2), b1.mul(b2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Gq) -> BiForm {
        let mut out = BiForm::zero(self.nvars);
        for ((a, b), c) in &self.coeff {
            out.add_term(a.clone(), b.clone(), c * k);
        }
        out
    }

    /// `g(z)·H` for a holomorphic `g`.
    pub fn mul_holomorphic(&self, g: &MultiPoly) -> Result<BiForm> {
        self.checked_mul(&BiForm::outer(g, &MultiPoly::one(g.nvars()))?)
    }

    /// True iff `c_{βα} = conj(c_{αβ})` for all pairs, i.e. the form is real-valued.
    pub fn is_hermitian_symmetric(&self) -> bool {
        self.coeff.iter().all(|((a, b), c)| {
            self.coeff.get(&(b.clone(), a.clone())).is_some_and(|d| *d == c.conj())
        })
    }

    /// Conjugate form `conj(H(z, z̄))`, i.e. `c'_{αβ} = conj(c_{βα})`.
    pub fn hermitian_adjoint(&self) -> BiForm {
        let mut out = BiForm::zero(self.nvars);
        for ((a, b), c) in &self.coeff {
            out.add_term(b.clone(), a.clone(), c.conj());
        }
        out
    }

    /// Evaluates the polarization `H(x, ȳ) = Σ c_{αβ} x^α conj(y)^β`.
    pub fn eval_polarized(&self, x: &[Gq], y: &[Gq]) -> Result<Gq> {
        if x.len() != self.nvars || y.len() != self.nvars {
            return Err(Error::VariableCountMismatch { expected: self.nvars, found: x.len().min(y.len()) });
        }
        let ybar: Vec<Gq> = y.iter().map(Gq::conj).collect();
        let pw = |m: &Monomial, p: &[Gq]| {
            m.exponents()
                .iter()
                .zip(p)
                .fold(Gq::one(), |acc, (&e, v)| (0..e).fold(acc, |a, _| &a * v))
        };
        Ok(self.coeff.iter().map(|((a, b), c)| &(c * &pw(a, x)) * &pw(b, &ybar)).sum())
    }

    /// `∂/∂z_i` acting on the holomorphic index `α`.
    pub fn d_holo(&self, i: usize) -> BiForm {
        let mut out = BiForm::zero(self.nvars);
        for ((a, b), c) in &self.coeff {
            let e = a.exponents()[i];
            if e > 0 {
                let mut ex = a.exponents().to_vec();
                ex[i] -= 1;
                out.add_term(Monomial::new(ex), b.clone(), c.scale(&crate::exactnum::int(e as i64)));
            }
        }
        out
    }

    /// `∂/∂z̄_j` acting on the antiholomorphic index `β`.
    pub fn d_antiholo(&self, j: usize) -> BiForm {
        let mut out = BiForm::zero(self.nvars);
        for ((a, b), c) in &self.coeff {
            let e = b.exponents()[j];
            if e > 0 {
                let mut ex = b.exponents().to_vec();
                ex[j] -= 1;
                out.add_term(a.clone(), Monomial::new(ex), c.scale(&crate::exactnum::int(e as i64)));
            }
        }
        out
    }

    /// Polynomial in `2n` variables `(x, w)` with `w` standing for `ȳ`.
    pub fn to_polarized_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(2 * self.nvars);
        for ((a, b), c) in &self.coeff {
            p.add_term(a.concat(b), c.clone());
        }
        p
    }

    pub fn from_polarized_poly(p: &MultiPoly) -> BiForm {
        let n = p.nvars() / 2;
        let mut b = BiForm::zero(n);
        for (m, c) in p.terms() {
            let (a, be) = m.split_at(n);
            b.add_term(a, be, c.clone());
        }
        b
    }

    /// Coefficient matrix with rows indexed by the distinct `α` and columns
    /// by the distinct `β` that occur.
    pub fn coefficient_matrix(&self) -> (GqMatrix, Vec<Monomial>, Vec<Monomial>) {
        let alphas: Vec<Monomial> =
            self.coeff.keys().map(|(a, _)| a.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let betas: Vec<Monomial> =
            self.coeff.keys().map(|(_, b)| b.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut m = GqMatrix::zeros(alphas.len(), betas.len());
        for ((a, b), c) in &self.coeff {
            let i = alphas.binary_search(a).expect("alpha present");
            let j = betas.binary_search(b).expect("beta present");
            m[(i, j)] = c.clone();
        }
        (m, alphas, betas)
    }

    pub fn with_extra_vars(&self, extra: usize) -> BiForm {
        let mut out = BiForm::zero(self.nvars + extra);
        for ((a, b), c) in &self.coeff {
            out.add_term(a.with_extra_vars(extra), b.with_extra_vars(extra), c.clone());
        }
        out
    }
}

impl fmt::Debug for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.coeff.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*{a:?}*conj({b:?})")?;
        }
        Ok(())
    }
}

/// `⟨z, z⟩_{r,s,t} = Σ_k ε_k z_k z̄_k`.
pub fn inner_form(sig: Signature) -> BiForm {
    let n = sig.dim();
    let mut b = BiForm::zero(n);
    for k in 0..sig.rank() {
        b.add_term(Monomial::var(n, k), Monomial::var(n, k), sig.weight_gq(k));
    }
    b
}

/// `Σ_j ε'_j φ_j(z)·conj(ψ_j(z))` for the target signature.
pub fn biform_from_pair(phi: &[MultiPoly], psi: &[MultiPoly], target: Signature) -> Result<BiForm> {
    let n = target.dim();
    for len in [phi.len(), psi.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, found: len });
        }
    }
    let nvars = phi.first().map_or(0, MultiPoly::nvars);
    if let Some(p) = phi.iter().chain(psi).find(|p| p.nvars() != nvars) {
        return Err(Error::VariableCountMismatch { expected: nvars, found: p.nvars() });
    }
    let mut acc = BiForm::zero(nvars);
    for j in 0..target.rank() {
        let w = target.weight_gq(j);
        for (ma, ca) in phi[j].terms() {
            for (mb, cb) in psi[j].terms() {
                acc.add_term(ma.clone(), mb.clone(), &(ca * &cb.conj()) * &w);
            }
        }
    }
    Ok(acc)
}

/// Exact quotient `B / ⟨z, z⟩_{r,s,t}`, by single-divisor division in the
/// polarized variables.
pub fn divide_by_norm(b: &BiForm, sig: Signature) -> Result<BiForm> {
    if sig.rank() == 0 {
        return Err(Error::DegenerateNorm);
    }
    if b.nvars() != sig.dim() {
        return Err(Error::VariableCountMismatch { expected: sig.dim(), found: b.nvars() });
    }
    let divisor = inner_form(sig).to_polarized_poly();
    let (q, r) = b.to_polarized_poly().div_rem(&divisor)?;
    if !r.is_zero() {
        return Err(Error::NotDivisible);
    }
    Ok(BiForm::from_polarized_poly(&q))
}

/// Rank of the coefficient matrix `(c_{αβ})`.
pub fn hermitian_rank(b: &BiForm) -> usize {
    if b.is_zero() {
        return 0;
    }
    mat_rank(&b.coefficient_matrix().0)
}

/// One weighted square `weight·|poly|²` of a signature decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareTerm {
    pub weight: Rational,
    pub poly: MultiPoly,
}

/// `B = Σ_{positive} w_i|f_i|² − Σ_{negative} w_j|g_j|²` with positive weights.
///
/// Weights are kept explicit because normalizing them to one would need
/// square roots outside `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianSignature {
    pub p: usize,
    pub q: usize,
    pub positive: Vec<SquareTerm>,
    pub negative: Vec<SquareTerm>,
}

impl HermitianSignature {
    /// Rebuilds the form from the witnesses.
    pub fn reconstruct(&self, nvars: usize) -> BiForm {
        let mut acc = BiForm::zero(nvars);
        for (terms, sign) in [(&self.positive, 1i64), (&self.negative, -1)] {
            for t in terms {
                let w = Gq::from_rational(&t.weight * crate::exactnum::int(sign));
                let sq = BiForm::outer(&t.poly, &t.poly).expect("same nvars").scale(&w);
                acc = acc.checked_add(&sq).expect("same nvars");
            }
        }
        acc
    }
}

/// Signature of a hermitian-symmetric form by exact congruence
/// diagonalization of its coefficient matrix, with square witnesses.
pub fn hermitian_signature(b: &BiForm) -> Result<HermitianSignature> {
    if !b.is_hermitian_symmetric() {
        return Err(Error::NotHermitianSymmetric);
    }
    let monos: Vec<Monomial> = b.coeff.keys().map(|(a, _)| a.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let n = monos.len();
    let mut m = GqMatrix::zeros(n, n);
    for ((a, be), c) in &b.coeff {
        let i = monos.binary_search(a).expect("alpha");
        let j = monos.binary_search(be).expect("symmetric support");
        m[(i, j)] = c.clone();
    }
    let cong = congruence_diagonalize(&m)?;
    let g = cong.p.inverse()?;
    let mut sig = HermitianSignature { p: 0, q: 0, positive: Vec::new(), negative: Vec::new() };
    for (k, d) in cong.diag.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        // f_k has coefficients conj(G[k][α])
        let mut f = MultiPoly::zero(b.nvars());
        for (idx, mono) in monos.iter().enumerate() {
            f.add_term(mono.clone(), g[(k, idx)].conj());
        }
        let term = SquareTerm { weight: d.abs(), poly: f };
        if d.is_positive() {
            sig.positive.push(term);
        } else {
            sig.negative.push(term);
        }
    }
    sig.p = sig.positive.len();
    sig.q = sig.negative.len();
    Ok(sig)
}

/// `B = h1(z)·conj(h2(z))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFactor {
    pub h1: MultiPoly,
    pub h2: MultiPoly,
}

/// Factors a rank-one form; `h1` has leading coefficient one.
pub fn rank_one_factor(b: &BiForm) -> Result<RankFactor> {
    if b.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (m, alphas, betas) = b.coefficient_matrix();
    // any nonzero column: take the last β (every β column has an entry)
    let col = betas.len() - 1;
    let lead_row = (0..alphas.len())
        .rev()
        .find(|&i| !m[(i, col)].is_zero())
        .expect("column has a nonzero entry");
    let pivot = m[(lead_row, col)].clone();
    let mut h1 = MultiPoly::zero(b.nvars());
    for (i, a) in alphas.iter().enumerate() {
        h1.add_term(a.clone(), &m[(i, col)] / &pivot);
    }
    // h1's leading monomial might not be alphas[lead_row] if a larger α has a
    // zero in this column; then the matrix is not rank one and the check fails.
    let mut h2 = MultiPoly::zero(b.nvars());
    for (j, be) in betas.iter().enumerate() {
        h2.add_term(be.clone(), m[(lead_row, j)].conj());
    }
    let factor = RankFactor { h1, h2 };
    if BiForm::outer(&factor.h1, &factor.h2)? != *b {
        return Err(Error::NotRankOne);
    }
    Ok(factor)
}

/// Checks `B·∂_i∂̄_j B − ∂_i B·∂̄_j B = 0` for all `i, j`, the polynomial form
/// of `∂∂̄ log B ≡ 0`; holds exactly when `B` has rank at most one.
pub fn ddbar_log_test(b: &BiForm) -> Result<bool> {
    if b.is_zero() {
        return Err(Error::ZeroForm);
    }
    let n = b.nvars();
    let holo: Vec<BiForm> = (0..n).map(|i| b.d_holo(i)).collect();
    let anti: Vec<BiForm> = (0..n).map(|j| b.d_antiholo(j)).collect();
    for hi in &holo {
        for (j, aj) in anti.iter().enumerate() {
            let lhs = b.checked_mul(&hi.d_antiholo(j))?;
            let rhs = hi.checked_mul(aj)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `B(S·u, conj(S·u))`: substitutes `z = S·u` on both sides.
pub fn restrict_biform(b: &BiForm, s: &GqMatrix) -> Result<BiForm> {
    let linear = linear_forms(s, b.nvars())?;
    let mut cache = PowerCache::new(&linear);
    let mut out = BiForm::zero(s.cols());
    for ((a, be), c) in &b.coeff {
        let pa = cache.monomial(a);
        let pb = cache.monomial(be);
        let prod = BiForm::outer(&pa.scale(c), &pb)?;
        out = out.checked_add(&prod)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use proptest::prelude::*;

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn zz(n: usize, i: usize, j: usize, c: i64) -> BiForm {
        BiForm::outer(&z(n, i), &z(n, j)).unwrap().scale(&Gq::from_int(c))
    }

    fn sum(forms: &[BiForm]) -> BiForm {
        forms.iter().skip(1).fold(forms[0].clone(), |a, b| a.checked_add(b).unwrap())
    }

    fn sig(r: usize, s: usize, t: usize) -> Signature {
        Signature::new(r, s, t).unwrap()
    }

    #[test]
    fn inner_form_examples() {
        assert_eq!(inner_form(sig(1, 1, 0)), sum(&[zz(2, 0, 0, 1), zz(2, 1, 1, -1)]));
        assert_eq!(inner_form(sig(2, 0, 0)), sum(&[zz(2, 0, 0, 1), zz(2, 1, 1, 1)]));
        assert!(inner_form(sig(0, 0, 2)).is_zero());
        assert!(Signature::new(0, 0, 0).is_err());
    }

    #[test]
    fn biform_from_pair_examples() {
        let id = vec![z(2, 0), z(2, 1)];
        assert_eq!(biform_from_pair(&id, &id, sig(2, 0, 0)).unwrap(), inner_form(sig(2, 0, 0)));
        let f = z(2, 0).poly_mul(&z(2, 1)).unwrap();
        let phi = vec![f.clone(), MultiPoly::zero(2)];
        let psi = vec![MultiPoly::zero(2), f];
        assert!(biform_from_pair(&phi, &psi, sig(2, 0, 0)).unwrap().is_zero());
        assert_eq!(
            biform_from_pair(&id[..1], &id, sig(2, 0, 0)),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        );
        let bad = vec![z(3, 0), z(3, 1)];
        assert!(matches!(
            biform_from_pair(&id, &bad, sig(2, 0, 0)),
            Err(Error::VariableCountMismatch { .. })
        ));
    }

    #[test]
    fn divide_examples() {
        let norm = inner_form(sig(2, 0, 0));
        let q = zz(2, 0, 1, 1);
        let b = norm.checked_mul(&q).unwrap();
        assert_eq!(divide_by_norm(&b, sig(2, 0, 0)).unwrap(), q);
        assert_eq!(divide_by_norm(&zz(2, 0, 0, 1), sig(2, 0, 0)), Err(Error::NotDivisible));
        assert_eq!(divide_by_norm(&zz(2, 0, 0, 1), sig(0, 0, 2)), Err(Error::DegenerateNorm));
        // r = 0: divisor leads with -z1 ȳ1
        let neg = inner_form(sig(0, 2, 0));
        let b = neg.checked_mul(&q).unwrap();
        assert_eq!(divide_by_norm(&b, sig(0, 2, 0)).unwrap(), q);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(hermitian_rank(&inner_form(sig(2, 0, 0))), 2);
        let s = z(2, 0).checked_add(&z(2, 1)).unwrap();
        assert_eq!(hermitian_rank(&BiForm::outer(&s, &s).unwrap()), 1);
        assert_eq!(hermitian_rank(&BiForm::zero(3)), 0);
        // z1 z̄1 + z3 z̄3
        assert_eq!(hermitian_rank(&sum(&[zz(3, 0, 0, 1), zz(3, 2, 2, 1)])), 2);
    }

    #[test]
    fn signature_examples() {
        let s = hermitian_signature(&inner_form(sig(1, 1, 0))).unwrap();
        assert_eq!((s.p, s.q), (1, 1));
        let hyper = sum(&[zz(2, 0, 1, 1), zz(2, 1, 0, 1)]);
        let s = hermitian_signature(&hyper).unwrap();
        assert_eq!((s.p, s.q), (1, 1));
        assert_eq!(s.reconstruct(2), hyper);
        let w = sum(&[zz(3, 0, 0, 1), zz(3, 2, 2, 1)]);
        let s = hermitian_signature(&w).unwrap();
        assert_eq!((s.p, s.q), (2, 0));
        assert_eq!(s.reconstruct(3), w);
        let asym = zz(2, 0, 1, 1);
        assert_eq!(hermitian_signature(&asym), Err(Error::NotHermitianSymmetric));
    }

    #[test]
    fn rank_one_examples() {
        let p = z(2, 0).checked_add(&z(2, 1)).unwrap();
        let m = z(2, 0).checked_sub(&z(2, 1)).unwrap();
        let f = rank_one_factor(&BiForm::outer(&p, &m).unwrap()).unwrap();
        assert_eq!(f, RankFactor { h1: p.clone(), h2: m.clone() });
        let f = rank_one_factor(&zz(2, 0, 0, 1)).unwrap();
        assert_eq!(f, RankFactor { h1: z(2, 0), h2: z(2, 0) });
        assert_eq!(rank_one_factor(&inner_form(sig(2, 0, 0))), Err(Error::NotRankOne));
        assert_eq!(rank_one_factor(&BiForm::zero(2)), Err(Error::ZeroForm));
        // unit absorbed into h2: (2i z1)·conj(z2)
        let b = BiForm::outer(&z(2, 0).scale(&Gq::from_ints(0, 2)), &z(2, 1)).unwrap();
        let f = rank_one_factor(&b).unwrap();
        assert_eq!(f.h1, z(2, 0));
        assert_eq!(f.h2, z(2, 1).scale(&Gq::from_ints(0, -2)));
    }

    #[test]
    fn ddbar_examples() {
        let s = z(2, 0).checked_add(&z(2, 1)).unwrap();
        assert!(ddbar_log_test(&BiForm::outer(&s, &s).unwrap()).unwrap());
        assert!(!ddbar_log_test(&inner_form(sig(2, 0, 0))).unwrap());
        assert_eq!(ddbar_log_test(&BiForm::zero(2)), Err(Error::ZeroForm));
    }

    #[test]
    fn ddbar_fails_at_mixed_index() {
        // For B = z1z̄1 + z2z̄2 and (i, j) = (1, 2): B·0 − z̄1·z2 ≠ 0
        let b = inner_form(sig(2, 0, 0));
        let lhs = b.checked_mul(&b.d_holo(0).d_antiholo(1)).unwrap();
        let rhs = b.d_holo(0).checked_mul(&b.d_antiholo(1)).unwrap();
        assert!(lhs.is_zero());
        assert_eq!(rhs, zz(2, 1, 0, 1));
    }

    #[test]
    fn restrict_examples() {
        let b = inner_form(sig(1, 1, 0));
        let line = GqMatrix::from_int_rows(&[&[1], &[1]]);
        assert!(restrict_biform(&b, &line).unwrap().is_zero());
        assert_eq!(restrict_biform(&b, &GqMatrix::identity(2)).unwrap(), b);
        assert!(restrict_biform(&b, &GqMatrix::identity(3)).is_err());
    }

    #[test]
    fn polarized_eval_matches_definition() {
        let g = |a, b| Gq::from_ints(a, b);
        let b = inner_form(sig(1, 1, 0));
        let v = b.eval_polarized(&[g(1, 1), g(2, 0)], &[g(3, 0), g(0, 1)]).unwrap();
        // (1+i)·3 − 2·conj(i) = 3+3i + 2i
        assert_eq!(v, g(3, 5));
        assert_eq!(b.hermitian_adjoint(), b);
        assert!(b.is_hermitian_symmetric());
        let _ = int(0);
    }

    fn arb_biform(n: usize) -> impl Strategy<Value = BiForm> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..3, n),
                proptest::collection::vec(0u32..3, n),
                -3i64..4,
                -3i64..4,
            ),
            1..5,
        )
        .prop_map(move |ts| {
            BiForm::from_terms(n, ts.into_iter().map(|(a, b, x, y)| (a, b, Gq::from_ints(x, y)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn norm_division_round_trip(q in arb_biform(3), r in 1usize..3, s in 0usize..2) {
            let sg = sig(r, s, 3 - r - s);
            let b = inner_form(sg).checked_mul(&q).unwrap();
            prop_assert_eq!(divide_by_norm(&b, sg).unwrap(), q);
        }

        #[test]
        fn rank_zero_iff_zero_and_ddbar_agrees(b in arb_biform(2)) {
            let r = hermitian_rank(&b);
            prop_assert_eq!(r == 0, b.is_zero());
            if !b.is_zero() {
                prop_assert_eq!(ddbar_log_test(&b).unwrap(), r <= 1);
            }
        }

        #[test]
        fn signature_reconstructs(b in arb_biform(2)) {
            let h = b.checked_add(&b.hermitian_adjoint()).unwrap();
            let s = hermitian_signature(&h).unwrap();
            prop_assert_eq!(s.p + s.q, hermitian_rank(&h));
            prop_assert_eq!(s.reconstruct(2), h);
        }

        #[test]
        fn restriction_keeps_symmetry_and_rank_bound(b in arb_biform(3),
                s in proptest::collection::vec((-2i64..3, -2i64..3), 6)) {
            let h = b.checked_add(&b.hermitian_adjoint()).unwrap();
            let rows: Vec<Vec<Gq>> = s.chunks(2)
                .map(|r| r.iter().map(|&(x, y)| Gq::from_ints(x, y)).collect()).collect();
            let sm = GqMatrix::from_rows(rows).unwrap();
            let rh = restrict_biform(&h, &sm).unwrap();
            prop_assert!(rh.is_hermitian_symmetric());
            prop_assert!(hermitian_rank(&rh) <= hermitian_rank(&h));
        }
    }
}
