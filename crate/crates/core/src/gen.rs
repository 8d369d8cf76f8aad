//! Seeded generators for fixtures and randomized families.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64`; independent
//! streams for trial `i` of a run use [`derive_seed`].

use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::biform::Signature;
use crate::error::{Error, Result};
use crate::exactla::{congruence_diagonalize, h_matrix, GqMatrix};
use crate::exactnum::{Gq, Rational};
use crate::pairs::{Decomposition, PolyMapPair};
use crate::poly::{Monomial, MultiPoly};

pub const DEFAULT_MAX_RETRIES: usize = 64;

/// Rejection-sampling bound, from `HERMRANK_MAX_RETRIES` when set.
pub fn max_retries() -> usize {
    std::env::var("HERMRANK_MAX_RETRIES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_RETRIES)
}

/// Seed for stream `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub source: Signature,
    pub target: Signature,
    /// Upper bound on component degrees.
    pub max_degree: u32,
    /// Real and imaginary parts of drawn coefficients lie in `[-height, height]`.
    pub height: i64,
}

impl GenConfig {
    pub fn new(seed: u64, source: Signature, target: Signature) -> Self {
        GenConfig { seed, source, target, max_degree: 3, height: 3 }
    }
}

/// Gaussian integer with parts in `[-height, height]`.
pub fn random_gq<R: Rng>(rng: &mut R, height: i64) -> Gq {
    Gq::from_ints(rng.gen_range(-height..=height), rng.gen_range(-height..=height))
}

pub fn random_nonzero_gq<R: Rng>(rng: &mut R, height: i64) -> Gq {
    loop {
        let g = random_gq(rng, height.max(1));
        if !g.is_zero() {
            return g;
        }
    }
}

/// Homogeneous polynomial of degree `d`; each monomial is kept with
/// probability `density`. May be zero.
pub fn random_homogeneous<R: Rng>(rng: &mut R, nvars: usize, d: u32, height: i64, density: f64) -> MultiPoly {
    let mut p = MultiPoly::zero(nvars);
    for m in Monomial::all_of_degree(nvars, d) {
        if rng.gen_bool(density) {
            p.add_term(m, random_nonzero_gq(rng, height));
        }
    }
    p
}

pub fn random_nonzero_homogeneous<R: Rng>(rng: &mut R, nvars: usize, d: u32, height: i64) -> MultiPoly {
    loop {
        let p = random_homogeneous(rng, nvars, d, height, 0.5);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, height: i64) -> GqMatrix {
    let data = (0..rows).map(|_| (0..cols).map(|_| random_gq(rng, height)).collect()).collect();
    GqMatrix::from_rows(data).expect("rectangular")
}

/// Invertible matrix with its inverse, by rejection.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, height: i64) -> Result<(GqMatrix, GqMatrix)> {
    let limit = max_retries();
    for _ in 0..limit {
        let m = random_matrix(rng, n, n, height);
        if let Ok(inv) = m.inverse() {
            return Ok((m, inv));
        }
    }
    Err(Error::GenerationExhausted(limit))
}

fn block_diag(a: &GqMatrix, b: &GqMatrix) -> GqMatrix {
    let n = a.rows() + b.rows();
    let m = a.cols() + b.cols();
    let mut out = GqMatrix::zeros(n, m);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
        }
    }
    out
}

fn check_sig(r: usize, s: usize, what: &str) -> Result<()> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidSignature(format!("{what} needs r ≥ 1 and s ≥ 1, got ({r},{s})")));
    }
    Ok(())
}

/// The generalized Whitney pair from `(r, s, 0)` to `(2n − 2, 0, 0)`,
/// `n = r + s`, whose multiplier is `|z_1|² + |z_n|²`.
pub fn whitney(r: usize, s: usize) -> Result<PolyMapPair> {
    check_sig(r, s, "whitney")?;
    let n = r + s;
    let np = 2 * n - 2;
    let z = |i: usize| MultiPoly::var(n, i - 1);
    let zz = |i: usize, j: usize| z(i).poly_mul(&z(j)).expect("same nvars");
    let mut phi = Vec::with_capacity(np);
    let mut psi = Vec::with_capacity(np);
    for j in 1..=np {
        let (f, sign) = if j <= r {
            (zz(1, j), 1)
        } else if j < n {
            (zz(1, j), -1)
        } else if j <= n + r - 2 {
            (zz(n, j + 2 - n), 1)
        } else {
            (zz(n, j + 2 - n), -1)
        };
        psi.push(f.scale(&Gq::from_int(sign)));
        phi.push(f);
    }
    PolyMapPair::new(phi, psi, Signature::new(r, s, 0)?, Signature::new(np, 0, 0)?)
}

/// Random quasi-standard pair with `n' = r + s + q`, and its witness.
///
/// `B = T·diag(I, X)` and `C = T^{-*}·diag(H_{r,s}, Y)` with
/// `X = R·D₁`, `Y = R^{-*}·D₂` and complementary 0/1 diagonals `D₁, D₂`, so
/// `Y*X = 0` and `C*B = H_{r,s,q}` while both may be singular.
pub fn quasi_standard(cfg: &GenConfig, q: usize) -> Result<(PolyMapPair, Decomposition)> {
    let src = cfg.source;
    let m = src.rank();
    let np = m + q;
    if cfg.target != (Signature { r: np, s: 0, t: 0 }) {
        return Err(Error::InvalidSignature(format!(
            "quasi_standard needs target ({np},0,0), got {}",
            cfg.target
        )));
    }
    if m == 0 {
        return Err(Error::InvalidSignature("source needs r + s ≥ 1".into()));
    }
    let mut rng = rng(cfg.seed);
    let h = cfg.height;
    let (t, tinv) = random_invertible(&mut rng, np, 2)?;
    let (rm, rinv) = random_invertible(&mut rng, q, 2)?;
    let ones = rng.gen_range(0..=q);
    let d1: Vec<Gq> = (0..q).map(|i| Gq::from_int((i < ones) as i64)).collect();
    let d2: Vec<Gq> = (0..q).map(|i| Gq::from_int((i >= ones) as i64)).collect();
    let x = &rm * &GqMatrix::diagonal(&d1);
    let y = &rinv.adjoint() * &GqMatrix::diagonal(&d2);
    let b = &t * &block_diag(&GqMatrix::identity(m), &x);
    let c = &tinv.adjoint() * &block_diag(&h_matrix(src.r, src.s, 0), &y);

    let nv = src.dim();
    let top = cfg.max_degree.max(1) - 1;
    let deg1 = rng.gen_range(0..=top);
    let deg2 = rng.gen_range(0..=top);
    let h1 = random_nonzero_homogeneous(&mut rng, nv, deg1, h);
    let h2 = random_nonzero_homogeneous(&mut rng, nv, deg2, h);
    let phi_rest: Vec<MultiPoly> = (0..q).map(|_| random_homogeneous(&mut rng, nv, deg1 + 1, h, 0.4)).collect();
    let psi_rest: Vec<MultiPoly> = (0..q).map(|_| random_homogeneous(&mut rng, nv, deg2 + 1, h, 0.4)).collect();

    let stack = |hh: &MultiPoly, rest: &[MultiPoly]| -> Vec<MultiPoly> {
        (0..m)
            .map(|k| hh.poly_mul(&MultiPoly::var(nv, k)).expect("same nvars"))
            .chain(rest.iter().cloned())
            .collect()
    };
    let apply = |mat: &GqMatrix, v: &[MultiPoly]| -> Vec<MultiPoly> {
        (0..np).map(|i| crate::poly::linear_combination(mat.row(i), v, nv)).collect()
    };
    let phi = apply(&b, &stack(&h1, &phi_rest));
    let psi = apply(&c, &stack(&h2, &psi_rest));
    let pair = PolyMapPair::new(phi, psi, src, cfg.target)?;
    let witness = Decomposition { b, c, h1, h2, phi_rest, psi_rest, lambda: Rational::from_integer(1.into()) };
    debug_assert!(witness.certify(&pair));
    Ok((pair, witness))
}

/// Random null pair: on each non-null target component at most one of `φ`,
/// `ψ` is nonzero, so the pairing vanishes identically.
pub fn null_pair(cfg: &GenConfig) -> Result<PolyMapPair> {
    let tgt = cfg.target;
    if tgt.dim() < 2 {
        return Err(Error::InvalidSignature(format!("null_pair needs at least two target components, got {tgt}")));
    }
    let mut rng = rng(cfg.seed);
    let nv = cfg.source.dim();
    let d_phi = rng.gen_range(1..=cfg.max_degree.max(1));
    let d_psi = rng.gen_range(1..=cfg.max_degree.max(1));
    // component 0 carries φ and component 1 carries ψ so neither is empty
    let owner: Vec<u8> = (0..tgt.dim())
        .map(|j| match j {
            0 => 0,
            1 => 1,
            _ if tgt.weight(j) == 0 => 2,
            _ => rng.gen_range(0..2),
        })
        .collect();
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for &o in &owner {
        phi.push(if o != 1 { random_nonzero_homogeneous(&mut rng, nv, d_phi, cfg.height) } else { MultiPoly::zero(nv) });
        psi.push(if o != 0 { random_nonzero_homogeneous(&mut rng, nv, d_psi, cfg.height) } else { MultiPoly::zero(nv) });
    }
    PolyMapPair::new(phi, psi, cfg.source, tgt)
}

/// The same pair over `t_extra` further null source variables.
pub fn extend_with_null_vars(pair: &PolyMapPair, t_extra: usize) -> PolyMapPair {
    pair.with_null_vars(t_extra)
}

/// Standard basis columns spanning the first `a` positive and first `b`
/// negative directions.
pub fn coordinate_subspace(sig: Signature, a: usize, b: usize) -> Result<GqMatrix> {
    check_subspace_request(sig, a, b)?;
    let n = sig.dim();
    let mut s = GqMatrix::zeros(n, a + b);
    for k in 0..a {
        s[(k, k)] = Gq::from_int(1);
    }
    for k in 0..b {
        s[(sig.r + k, a + k)] = Gq::from_int(1);
    }
    Ok(s)
}

fn check_subspace_request(sig: Signature, a: usize, b: usize) -> Result<()> {
    if a > sig.r || b > sig.s || a + b == 0 {
        return Err(Error::InvalidSignature(format!("no ({a},{b})-subspace in {sig}")));
    }
    Ok(())
}

/// Exact random isometry `U` of `H_{r,s}`: `U*·H_{r,s}·U = H_{r,s}`.
///
/// `U = (I − K)⁻¹(I + K)` with `K = H_{r,s}·A` and `A` random
/// skew-Hermitian; `K` is skew for the form, so its Cayley transform
/// preserves it. `None` when `I − K` happens to be singular.
pub fn random_isometry<R: Rng>(rng: &mut R, r: usize, s: usize) -> Option<GqMatrix> {
    let m = r + s;
    let x = random_matrix(rng, m, m, 2);
    let xa = x.adjoint();
    let mut skew = x.clone();
    for i in 0..m {
        for j in 0..m {
            skew[(i, j)] = &x[(i, j)] - &xa[(i, j)];
        }
    }
    let k = &h_matrix(r, s, 0) * &skew;
    let mut minus = GqMatrix::identity(m);
    let mut plus = GqMatrix::identity(m);
    for i in 0..m {
        for j in 0..m {
            minus[(i, j)] = &minus[(i, j)] - &k[(i, j)];
            plus[(i, j)] = &plus[(i, j)] + &k[(i, j)];
        }
    }
    Some(&minus.inverse().ok()? * &plus)
}

/// Random `n × (a+b)` basis `S` with `S*·H_{r,s,t}·S = H_{a,b}` exactly.
///
/// Columns are the first `a` positive and first `b` negative columns of a
/// [`random_isometry`]. Rows for null directions are free and drawn at random.
pub fn random_subspace(sig: Signature, a: usize, b: usize, seed: u64) -> Result<GqMatrix> {
    check_subspace_request(sig, a, b)?;
    let m = sig.rank();
    let n = sig.dim();
    let mut rng = rng(seed);
    let limit = max_retries();
    for _ in 0..limit {
        let Some(u) = random_isometry(&mut rng, sig.r, sig.s) else { continue };
        let cols: Vec<usize> = (0..a).chain(sig.r..sig.r + b).collect();
        let picked = u.select_columns(&cols);
        let mut s = GqMatrix::zeros(n, a + b);
        for i in 0..n {
            for j in 0..a + b {
                s[(i, j)] = if i < m { picked[(i, j)].clone() } else { random_gq(&mut rng, 2) };
            }
        }
        let gram = &(&s.adjoint() * &h_matrix(sig.r, sig.s, sig.t)) * &s;
        if congruence_diagonalize(&gram)?.inertia() == (a, b, 0) {
            return Ok(s);
        }
    }
    Err(Error::GenerationExhausted(limit))
}

/// Random orthogonal map from `(r, s, 0)` into `(r + k, s + k, 0)` with
/// its witness `φ = W·[h·z; Φ]`, `W*·H'·W = λ·H_{r,s,2k}`.
///
/// `W` holds `c·u_i` for the positive and negative columns `u_i` of a random
/// isometry, `k` null columns `u_{r+i} + u_{r+k+s+i}` and `k` zero columns;
/// `λ = |c|²` for a random Gaussian integer `c`.
pub fn quasi_standard_map(cfg: &GenConfig, k: usize) -> Result<(Vec<MultiPoly>, crate::pairs::MapDecomposition)> {
    let src = cfg.source;
    let (r, s) = (src.r, src.s);
    if src.t != 0 || r + s == 0 {
        return Err(Error::InvalidSignature(format!("quasi_standard_map needs source (r,s,0) with r+s ≥ 1, got {src}")));
    }
    let (rp, sp) = (r + k, s + k);
    let np = rp + sp;
    let mut rng = rng(cfg.seed);
    let limit = max_retries();
    let u = (0..limit)
        .find_map(|_| random_isometry(&mut rng, rp, sp))
        .ok_or(Error::GenerationExhausted(limit))?;
    let c = random_nonzero_gq(&mut rng, 2);
    let mut cols: Vec<Vec<Gq>> = (0..r).chain(rp..rp + s).map(|j| u.column(j).iter().map(|x| x * &c).collect()).collect();
    for i in 0..k {
        let (p, q) = (u.column(r + i), u.column(rp + s + i));
        cols.push(p.iter().zip(&q).map(|(x, y)| x + y).collect());
    }
    cols.resize(np, vec![Gq::zero(); np]);
    let w = GqMatrix::from_columns(&cols, np)?;

    let nv = src.dim();
    let deg = rng.gen_range(0..cfg.max_degree.max(1));
    let h = random_nonzero_homogeneous(&mut rng, nv, deg, cfg.height);
    let mut phi_rest: Vec<MultiPoly> = (0..k).map(|_| random_homogeneous(&mut rng, nv, deg + 1, cfg.height, 0.4)).collect();
    phi_rest.resize(2 * k, MultiPoly::zero(nv));
    let stacked: Vec<MultiPoly> = (0..r + s)
        .map(|j| h.poly_mul(&MultiPoly::var(nv, j)).expect("same nvars"))
        .chain(phi_rest.iter().cloned())
        .collect();
    let phi = (0..np).map(|i| crate::poly::linear_combination(w.row(i), &stacked, nv)).collect();
    let witness = crate::pairs::MapDecomposition { w, h, phi_rest, lambda: c.norm_sqr() };
    Ok((phi, witness))
}
