//! Dense exact linear algebra over the Gaussian rationals.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{Gq, Rational};

/// Row-major dense matrix over `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Gq>,
}

impl GqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GqMatrix { rows, cols, data: vec![Gq::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Gq::one();
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(diag: &[Gq]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gq>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(GqMatrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Integer-entry convenience constructor, mostly for tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Gq::from_int(x)).collect()).collect())
            .expect("rectangular")
    }

    pub fn from_columns(cols: &[Vec<Gq>], nrows: usize) -> Result<Self> {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::ShapeMismatch("column length".into()));
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Gq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Gq> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Gq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        GqMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Gq::conj).collect() }
    }

    /// Conjugate transpose `M*`.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn scale(&self, k: &Gq) -> Self {
        GqMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn checked_mul(&self, rhs: &GqMatrix) -> Result<GqMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Gq]) -> Result<Vec<Gq>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Columns `cols` of this matrix, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &GqMatrix) -> Result<GqMatrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack row count".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (GqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = &f * &m[(r, j)];
                    m[(i, j)] -= &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Linearly independent columns spanning the column space (the pivot
    /// columns of the RREF), and their indices.
    pub fn column_basis(&self) -> (GqMatrix, Vec<usize>) {
        let (_, pivots) = self.rref();
        (self.select_columns(&pivots), pivots)
    }

    /// Basis of `{x : M x = 0}` as columns of the returned vectors.
    pub fn nullspace(&self) -> Vec<Vec<Gq>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Gq::zero(); self.cols];
                v[f] = Gq::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<GqMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Self::identity(0));
        }
        let aug = self.hstack(&Self::identity(n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NoSolution);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.select_columns(&cols))
    }
}

impl Index<(usize, usize)> for GqMatrix {
    type Output = Gq;
    fn index(&self, (i, j): (usize, usize)) -> &Gq {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for GqMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Gq {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &GqMatrix {
    type Output = GqMatrix;
    fn mul(self, rhs: &GqMatrix) -> GqMatrix {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }
}

impl fmt::Debug for GqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GqMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Exact rank by fraction-free (Bareiss) elimination.
///
/// Rows are first scaled to Gaussian-integer entries; every subsequent
/// division is exact, so entries stay in `Z[i]` and their size tracks the
/// minors of the input rather than growing geometrically.
pub fn mat_rank(m: &GqMatrix) -> usize {
    use num_integer::Integer;
    let mut a = m.clone();
    for i in 0..a.rows {
        let l = a.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom_lcm()));
        if !l.is_one() {
            let k = Rational::from_integer(l);
            for j in 0..a.cols {
                a[(i, j)] = a[(i, j)].scale(&k);
            }
        }
    }
    let mut prev = Gq::one();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let pivot = a[(r, c)].clone();
        for i in r + 1..a.rows {
            let lead = a[(i, c)].clone();
            for j in c + 1..a.cols {
                let v = &(&pivot * &a[(i, j)]) - &(&lead * &a[(r, j)]);
                a[(i, j)] = &v / &prev;
            }
            a[(i, c)] = Gq::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// One exact solution of `M x = b` together with a basis of `ker M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Gq>,
    pub nullspace: Vec<Vec<Gq>>,
}

pub fn mat_solve(m: &GqMatrix, b: &[Gq]) -> Result<Solution> {
    if b.len() != m.rows {
        return Err(Error::ShapeMismatch(format!("rhs length {} vs {} rows", b.len(), m.rows)));
    }
    let rhs = GqMatrix::from_columns(&[b.to_vec()], m.rows)?;
    let (r, pivots) = m.hstack(&rhs)?.rref();
    if pivots.last() == Some(&m.cols) {
        return Err(Error::NoSolution);
    }
    let mut particular = vec![Gq::zero(); m.cols];
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = r[(row, m.cols)].clone();
    }
    Ok(Solution { particular, nullspace: m.nullspace() })
}

/// Result of a Hermitian congruence diagonalization `P* M P = D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub p: GqMatrix,
    pub diag: Vec<Rational>,
}

impl Congruence {
    /// Counts of (positive, negative, zero) diagonal entries.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let pos = self.diag.iter().filter(|d| d.is_positive()).count();
        let neg = self.diag.iter().filter(|d| d.is_negative()).count();
        (pos, neg, self.diag.len() - pos - neg)
    }
}

/// Diagonalizes a Hermitian matrix by congruence.
///
/// Diagonal pivots are used when available (after a symmetric swap). When the
/// remaining diagonal is zero but an off-diagonal entry `a = M[k][j]` is not,
/// the 2x2 hyperbolic block `[[0, a], [ā, 0]]` is split by replacing `e_k`
/// with `e_k + ā e_j`, whose value `2|a|²` is a nonzero pivot; the block
/// contributes one positive and one negative entry.
pub fn congruence_diagonalize(m: &GqMatrix) -> Result<Congruence> {
    if !m.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut p = GqMatrix::identity(n);

    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                a.swap_rows(k, j);
                swap_cols(&mut a, k, j);
                swap_cols(&mut p, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                let c = a[(k, j)].conj();
                add_col_congruence(&mut a, &mut p, k, j, &c);
            } else {
                continue;
            }
        }
        let pivot = a[(k, k)].clone();
        debug_assert!(pivot.is_real());
        for j in k + 1..n {
            if a[(k, j)].is_zero() {
                continue;
            }
            let f = -&(&a[(k, j)] / &pivot);
            add_col_congruence(&mut a, &mut p, j, k, &f);
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].re.clone()).collect();
    debug_assert!((0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)].is_zero())));
    Ok(Congruence { p, diag })
}

fn swap_cols(m: &mut GqMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let (x, y) = (i * m.cols + a, i * m.cols + b);
        m.data.swap(x, y);
    }
}

/// Applies `E = I + c·e_src·e_dstᵀ` (column `dst` += c·column `src`) as the
/// congruence `A ← E* A E`, and accumulates `P ← P E`.
fn add_col_congruence(a: &mut GqMatrix, p: &mut GqMatrix, dst: usize, src: usize, c: &Gq) {
    let n = a.rows;
    for i in 0..n {
        let t = c * &a[(i, src)];
        a[(i, dst)] += &t;
    }
    let cc = c.conj();
    for j in 0..n {
        let t = &cc * &a[(src, j)];
        a[(dst, j)] += &t;
    }
    for i in 0..p.rows {
        let t = c * &p[(i, src)];
        p[(i, dst)] += &t;
    }
}

/// `H_{r,s,q}` as a matrix: `r` ones, `s` minus ones, `q` zeros.
pub fn h_matrix(r: usize, s: usize, q: usize) -> GqMatrix {
    let diag: Vec<Gq> = std::iter::repeat_n(Gq::one(), r)
        .chain(std::iter::repeat_n(-Gq::one(), s))
        .chain(std::iter::repeat_n(Gq::zero(), q))
        .collect();
    GqMatrix::diagonal(&diag)
}
