//! Orthogonal pairs: verification, multipliers, classification and the
//! quasi-standard decomposition with exact certificates.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::biform::{
    biform_from_pair, divide_by_norm, hermitian_rank, hermitian_signature, rank_one_factor, BiForm, Signature,
};
use crate::error::{Error, Result};
use crate::exactla::{h_matrix, mat_solve, GqMatrix};
use crate::exactnum::{Gq, Rational};
use crate::poly::{coefficient_matrix, homogenize, MultiPoly};

/// A candidate orthogonal pair `φ, ψ: P^{source} → P^{target}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMapPair {
    phi: Vec<MultiPoly>,
    psi: Vec<MultiPoly>,
    source: Signature,
    target: Signature,
}

fn check_tuple(tuple: &[MultiPoly], nvars: usize, len: usize) -> Result<()> {
    if tuple.len() != len {
        return Err(Error::LengthMismatch { expected: len, found: tuple.len() });
    }
    if let Some(p) = tuple.iter().find(|p| p.nvars() != nvars) {
        return Err(Error::VariableCountMismatch { expected: nvars, found: p.nvars() });
    }
    let mut degrees = tuple.iter().filter_map(MultiPoly::degree);
    let d = degrees.next();
    if tuple.iter().any(|p| !p.is_homogeneous()) || degrees.any(|e| Some(e) != d) {
        return Err(Error::NotHomogeneous);
    }
    Ok(())
}

impl PolyMapPair {
    pub fn new(phi: Vec<MultiPoly>, psi: Vec<MultiPoly>, source: Signature, target: Signature) -> Result<Self> {
        for sg in [source, target] {
            Signature::new(sg.r, sg.s, sg.t)?;
        }
        check_tuple(&phi, source.dim(), target.dim())?;
        check_tuple(&psi, source.dim(), target.dim())?;
        Ok(PolyMapPair { phi, psi, source, target })
    }

    /// The pair `(φ, φ)` of a single map.
    pub fn from_map(phi: Vec<MultiPoly>, source: Signature, target: Signature) -> Result<Self> {
        Self::new(phi.clone(), phi, source, target)
    }

    /// Homogenizes affine components; the new last variable is a null
    /// direction, so the source becomes `(r, s, t + 1)`.
    pub fn from_affine(
        phi: &[MultiPoly],
        psi: &[MultiPoly],
        source: Signature,
        target: Signature,
    ) -> Result<Self> {
        let (hphi, _) = homogenize(phi)?;
        let (hpsi, _) = homogenize(psi)?;
        Self::new(hphi, hpsi, Signature { t: source.t + 1, ..source }, target)
    }

    pub fn phi(&self) -> &[MultiPoly] {
        &self.phi
    }

    pub fn psi(&self) -> &[MultiPoly] {
        &self.psi
    }

    pub fn source(&self) -> Signature {
        self.source
    }

    pub fn target(&self) -> Signature {
        self.target
    }

    pub fn nvars(&self) -> usize {
        self.source.dim()
    }

    pub fn is_map(&self) -> bool {
        self.phi == self.psi
    }

    /// Target reduced to `(r'+s', 0, 0)`: the null block is dropped and the
    /// negative block of `ψ` is negated. The pairing is unchanged.
    pub fn reduce_to_definite(&self) -> PolyMapPair {
        let n = self.target.rank();
        let phi = self.phi[..n].to_vec();
        let psi = (0..n).map(|j| self.psi[j].scale(&self.target.weight_gq(j))).collect();
        PolyMapPair { phi, psi, source: self.source, target: Signature { r: n, s: 0, t: 0 } }
    }

    /// Substitutes `z = S·u`; `S` is `n × m` and `new_source` has dimension `m`.
    pub fn restrict(&self, s: &GqMatrix, new_source: Signature) -> Result<PolyMapPair> {
        if s.cols() != new_source.dim() {
            return Err(Error::ShapeMismatch(format!(
                "subspace has {} columns, signature {} has dimension {}",
                s.cols(),
                new_source,
                new_source.dim()
            )));
        }
        let sub = |t: &[MultiPoly]| t.iter().map(|p| p.restrict_linear(s)).collect::<Result<Vec<_>>>();
        Self::new(sub(&self.phi)?, sub(&self.psi)?, new_source, self.target)
    }

    /// Same components over `t_extra` additional null variables.
    pub fn with_null_vars(&self, t_extra: usize) -> PolyMapPair {
        let ext = |t: &[MultiPoly]| t.iter().map(|p| p.with_extra_vars(t_extra)).collect();
        PolyMapPair {
            phi: ext(&self.phi),
            psi: ext(&self.psi),
            source: Signature { t: self.source.t + t_extra, ..self.source },
            target: self.target,
        }
    }

    /// `Σ ε'_j φ_j(z)·conj(ψ_j(z))`.
    pub fn pairing(&self) -> BiForm {
        biform_from_pair(&self.phi, &self.psi, self.target).expect("validated at construction")
    }
}

/// True iff the polarized pairing is divisible by `⟨x, y⟩_{source}`.
pub fn verify_pair(pair: &PolyMapPair) -> bool {
    if pair.source.rank() == 0 {
        return true;
    }
    divide_by_norm(&pair.pairing(), pair.source).is_ok()
}

/// The multiplier `H` with `pairing = ⟨z, z⟩_{source}·H`.
pub fn multiplier(pair: &PolyMapPair) -> Result<BiForm> {
    match divide_by_norm(&pair.pairing(), pair.source) {
        Err(Error::NotDivisible) => Err(Error::NotAnOrthogonalPair),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Null,
    QuasiStandard,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub kind: Kind,
    pub multiplier: BiForm,
    pub rank: usize,
}

pub fn classify(pair: &PolyMapPair) -> Result<Classification> {
    let m = multiplier(pair)?;
    let rank = hermitian_rank(&m);
    let kind = match rank {
        0 => Kind::Null,
        1 => Kind::QuasiStandard,
        _ => Kind::Other,
    };
    if kind == Kind::QuasiStandard && pair.is_map() {
        // a map's multiplier is real, so it is ±|h|²
        let sig = hermitian_signature(&m)?;
        if sig.p + sig.q != 1 {
            return Err(Error::SignatureObstruction);
        }
    }
    Ok(Classification { kind, multiplier: m, rank })
}

/// `φ = B·[h1·z; Φ]`, `ψ = C·[h2·z; Ψ]` on the non-null target block, with
/// `C*·H_{r',s'}·B = λ·H_{r,s,q}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub b: GqMatrix,
    pub c: GqMatrix,
    pub h1: MultiPoly,
    pub h2: MultiPoly,
    pub phi_rest: Vec<MultiPoly>,
    pub psi_rest: Vec<MultiPoly>,
    pub lambda: Rational,
}

/// `[h·z_1, …, h·z_m, rest…]`.
fn stacked(h: &MultiPoly, m: usize, rest: &[MultiPoly]) -> Vec<MultiPoly> {
    let n = h.nvars();
    (0..m)
        .map(|k| h.poly_mul(&MultiPoly::var(n, k)).expect("same nvars"))
        .chain(rest.iter().cloned())
        .collect()
}

fn apply_matrix(m: &GqMatrix, v: &[MultiPoly], nvars: usize) -> Vec<MultiPoly> {
    (0..m.rows()).map(|i| crate::poly::linear_combination(m.row(i), v, nvars)).collect()
}

impl Decomposition {
    pub fn q(&self) -> usize {
        self.phi_rest.len()
    }

    /// Checks both certificate equations exactly against `pair`.
    pub fn certify(&self, pair: &PolyMapPair) -> bool {
        let (src, tgt) = (pair.source, pair.target);
        let n = tgt.rank();
        let q = self.q();
        let shapes_ok = self.psi_rest.len() == q
            && src.rank() + q == n
            && [&self.b, &self.c].iter().all(|m| m.rows() == n && m.cols() == n)
            && self.h1.nvars() == src.dim()
            && self.h2.nvars() == src.dim()
            && !self.lambda.is_zero();
        if !shapes_ok {
            return false;
        }
        let hp = h_matrix(tgt.r, tgt.s, 0);
        let lhs = &(&self.c.adjoint() * &hp) * &self.b;
        let rhs = h_matrix(src.r, src.s, q).scale(&Gq::from_rational(self.lambda.clone()));
        if lhs != rhs {
            return false;
        }
        let nv = src.dim();
        apply_matrix(&self.b, &stacked(&self.h1, src.rank(), &self.phi_rest), nv) == pair.phi[..n]
            && apply_matrix(&self.c, &stacked(&self.h2, src.rank(), &self.psi_rest), nv) == pair.psi[..n]
    }
}

/// Basis of the span of the values of a tuple, and the coordinates of the
/// tuple in that basis: `tuple = P·coords`.
fn span_coordinates(tuple: &[MultiPoly], nvars: usize) -> (GqMatrix, Vec<MultiPoly>) {
    let (m, monos) = coefficient_matrix(tuple);
    let (r, pivots) = m.rref();
    let basis = m.select_columns(&pivots);
    let coords = (0..pivots.len())
        .map(|i| {
            let mut p = MultiPoly::zero(nvars);
            for (j, mono) in monos.iter().enumerate() {
                p.add_term(mono.clone(), r[(i, j)].clone());
            }
            p
        })
        .collect();
    (basis, coords)
}

/// Vectors `a_k` in the span of `left`'s values with
/// `a_k*·right = ε_k·h·z_k` for `k < m`.
fn paired_vectors(left: &[MultiPoly], right: &[MultiPoly], h: &MultiPoly, source: Signature) -> Result<Vec<Vec<Gq>>> {
    let (lmat, _) = coefficient_matrix(left);
    let (u, _) = lmat.column_basis();
    let (rmat, monos) = coefficient_matrix(right);
    let sys = &rmat.adjoint() * &u;
    let nv = source.dim();
    (0..source.rank())
        .map(|k| {
            let target = h.poly_mul(&MultiPoly::var(nv, k))?.scale(&source.weight_gq(k));
            if target.terms().any(|(m, _)| monos.binary_search(m).is_err()) {
                return Err(Error::GenericityFailure(format!("h·z_{} has a monomial outside the span", k + 1)));
            }
            let rhs: Vec<Gq> = monos.iter().map(|m| target.coeff(m).conj()).collect();
            let sol = mat_solve(&sys, &rhs)
                .map_err(|_| Error::GenericityFailure(format!("no component functional for index {}", k + 1)))?;
            u.mul_vec(&sol.particular)
        })
        .collect()
}

/// `tuple − h·Σ_k z_k·vecs[k]`.
fn remainder(tuple: &[MultiPoly], h: &MultiPoly, vecs: &[Vec<Gq>]) -> Vec<MultiPoly> {
    let nv = h.nvars();
    tuple
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let mut acc = p.clone();
            for (k, v) in vecs.iter().enumerate() {
                let t = h.poly_mul(&MultiPoly::var(nv, k)).expect("same nvars").scale(&v[j]);
                acc = acc.checked_sub(&t).expect("same nvars");
            }
            acc
        })
        .collect()
}

/// `[vecs | basis | 0]` as an `n × n` matrix, with `coords` padded by zeros.
fn assemble(
    vecs: &[Vec<Gq>],
    basis: &GqMatrix,
    mut coords: Vec<MultiPoly>,
    n: usize,
    nvars: usize,
) -> Result<(GqMatrix, Vec<MultiPoly>)> {
    let q = n.checked_sub(vecs.len()).ok_or_else(|| Error::GenericityFailure("target too small".into()))?;
    if basis.cols() > q {
        return Err(Error::GenericityFailure(format!("null part spans {} > {q} directions", basis.cols())));
    }
    let mut cols: Vec<Vec<Gq>> = vecs.to_vec();
    cols.extend((0..basis.cols()).map(|j| basis.column(j)));
    cols.resize(n, vec![Gq::zero(); n]);
    coords.resize(q, MultiPoly::zero(nvars));
    Ok((GqMatrix::from_columns(&cols, n)?, coords))
}

fn require_rank_one(pair: &PolyMapPair) -> Result<BiForm> {
    let cl = classify(pair)?;
    if cl.kind != Kind::QuasiStandard {
        return Err(Error::NotQuasiStandard { rank: cl.rank });
    }
    Ok(cl.multiplier)
}

/// Quasi-standard decomposition of a pair, verified before it is returned.
///
/// `B`'s leading columns `a_k` lie in the span of `φ`'s values and are fixed
/// by `a_k*·ψ = ε_k·h2·z_k`; `C`'s leading columns likewise with the roles
/// swapped. The remainders `φ − h1·Σ z_k a_k` and `ψ − h2·Σ z_k b_k` pair to
/// zero, and their spans complete `B` and `C`.
pub fn decompose(pair: &PolyMapPair) -> Result<Decomposition> {
    let m = require_rank_one(pair)?;
    let red = pair.reduce_to_definite();
    let f = rank_one_factor(&m)?;
    let nv = pair.nvars();
    let n = red.target.r;
    let a = paired_vectors(&red.phi, &red.psi, &f.h2, pair.source)?;
    let b = paired_vectors(&red.psi, &red.phi, &f.h1, pair.source)?;
    let (pb, phi_c) = span_coordinates(&remainder(&red.phi, &f.h1, &a), nv);
    let (qb, psi_c) = span_coordinates(&remainder(&red.psi, &f.h2, &b), nv);
    let (bm, phi_rest) = assemble(&a, &pb, phi_c, n, nv)?;
    let (cm, psi_rest) = assemble(&b, &qb, psi_c, n, nv)?;
    let sign = h_matrix(pair.target.r, pair.target.s, 0);
    let d = Decomposition {
        b: bm,
        c: &sign * &cm,
        h1: f.h1,
        h2: f.h2,
        phi_rest,
        psi_rest,
        lambda: Rational::one(),
    };
    if !d.certify(pair) {
        return Err(Error::GenericityFailure("certificate check failed".into()));
    }
    Ok(d)
}

/// `φ = W·[h·z; Φ]` on the non-null target block with
/// `W*·H_{r',s'}·W = λ·H_{r,s,q}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDecomposition {
    pub w: GqMatrix,
    pub h: MultiPoly,
    pub phi_rest: Vec<MultiPoly>,
    pub lambda: Rational,
}

impl MapDecomposition {
    pub fn certify(&self, phi: &[MultiPoly], source: Signature, target: Signature) -> bool {
        let as_pair = Decomposition {
            b: self.w.clone(),
            c: self.w.clone(),
            h1: self.h.clone(),
            h2: self.h.clone(),
            phi_rest: self.phi_rest.clone(),
            psi_rest: self.phi_rest.clone(),
            lambda: self.lambda.clone(),
        };
        match PolyMapPair::from_map(phi.to_vec(), source, target) {
            Ok(p) => as_pair.certify(&p),
            Err(_) => false,
        }
    }
}

/// `Some(√q)` when `q ≥ 0` is the square of a rational.
fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

/// Decomposition of a single orthogonal map.
///
/// The multiplier is `μ·|h1|²` with `μ` real. When `|μ|` is a rational
/// square it is absorbed into `h`, leaving `λ = ±1`; otherwise `λ = μ`.
pub fn decompose_map(phi: &[MultiPoly], source: Signature, target: Signature) -> Result<MapDecomposition> {
    let pair = PolyMapPair::from_map(phi.to_vec(), source, target)?;
    let m = require_rank_one(&pair)?;
    let f = rank_one_factor(&m)?;
    let (lm, lc) = f.h1.leading_term().expect("nonzero factor");
    let mu = f.h2.coeff(lm).checked_div(lc)?;
    if !mu.is_real() || f.h1.scale(&mu) != f.h2 {
        return Err(Error::SignatureObstruction);
    }
    let mu = mu.re;
    let red = pair.reduce_to_definite();
    let nv = pair.nvars();
    let n = red.target.r;
    let h2 = f.h1.scale(&Gq::from_rational(mu.clone()));
    let mut a = paired_vectors(&red.phi, &red.psi, &h2, source)?;
    let (lambda, h) = match rational_sqrt(&mu.abs()) {
        Some(rho) => {
            let inv = Gq::from_rational(rho.recip());
            for v in &mut a {
                for x in v.iter_mut() {
                    *x *= &inv;
                }
            }
            (Rational::from_integer(mu.signum().to_integer()), f.h1.scale(&Gq::from_rational(rho)))
        }
        None => (mu, f.h1),
    };
    let (pb, coords) = span_coordinates(&remainder(&red.phi, &h, &a), nv);
    let (w, phi_rest) = assemble(&a, &pb, coords, n, nv)?;
    let d = MapDecomposition { w, h, phi_rest, lambda };
    if !d.certify(phi, source, target) {
        return Err(Error::GenericityFailure("certificate check failed".into()));
    }
    Ok(d)
}

/// Kinds observed on random non-degenerate slices of a degenerate source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub seed: u64,
    pub trials: usize,
    pub null: usize,
    pub quasi_standard: usize,
    pub other: usize,
    pub direct: Kind,
}

impl RestrictionReport {
    /// The common kind when every restriction agreed.
    pub fn unanimous(&self) -> Option<Kind> {
        match (self.null, self.quasi_standard, self.other) {
            (n, 0, 0) if n == self.trials => Some(Kind::Null),
            (0, q, 0) if q == self.trials => Some(Kind::QuasiStandard),
            (0, 0, o) if o == self.trials => Some(Kind::Other),
            _ => None,
        }
    }
}

/// Restricts a pair with a degenerate source to `trials` random
/// `(r, s)`-subspaces and classifies each restriction.
pub fn restriction_classify(pair: &PolyMapPair, trials: usize, seed: u64) -> Result<RestrictionReport> {
    let src = pair.source;
    if src.t == 0 {
        return Err(Error::SourceNotDegenerate);
    }
    let direct = classify(pair)?.kind;
    let sub_sig = Signature::new(src.r, src.s, 0)?;
    let mut report = RestrictionReport { seed, trials, null: 0, quasi_standard: 0, other: 0, direct };
    for i in 0..trials {
        let s = crate::gen::random_subspace(src, src.r, src.s, crate::gen::derive_seed(seed, i as u64))?;
        match classify(&pair.restrict(&s, sub_sig)?)?.kind {
            Kind::Null => report.null += 1,
            Kind::QuasiStandard => report.quasi_standard += 1,
            Kind::Other => report.other += 1,
        }
    }
    Ok(report)
}
