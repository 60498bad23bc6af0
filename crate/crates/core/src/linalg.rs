//! Exact linear algebra over the rationals.
//!
//! Everything here is dense. The infinitesimal engine works in dimension at
//! most ten or so, where exact arithmetic is cheap and removes every
//! tolerance question. Subspaces are always kept in reduced row-echelon form,
//! so two equal subspaces compare equal bit for bit and can be deduplicated
//! with ordinary `Eq`/`Hash`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Field element for every exact computation in the crate.
///
/// `BigRational` already keeps its values normalized (positive denominator,
/// reduced, zero as `0/1`).
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("tensor shape mismatch: expected {expected} entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Formats as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but keeps the column count when
    /// there are no rows.
    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RationalMatrix {
            rows: n_rows,
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(v).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(RationalMatrix { data, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(RationalMatrix { data, ..*self })
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        RationalMatrix { data, ..*self }
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Reduced row-echelon form, same shape, zero rows at the bottom.
    pub fn rref(&self) -> Self {
        let mut m = self.clone();
        m.rref_in_place();
        m
    }

    /// Reduces in place and returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let pv = self.get(r, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &f * pv;
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().nonzero_rows()
    }

    fn nonzero_rows(&self) -> usize {
        (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|x| !x.is_zero()))
            .count()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(tI - M)`, coefficients low to high.
    ///
    /// Faddeev–LeVerrier recursion; exact over the rationals.
    pub fn characteristic_polynomial(&self) -> Vec<Rational> {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut aux = Self::zeros(n, n);
        for k in 1..=n {
            // aux_k = M aux_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&aux).expect("square");
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v);
            }
            let c = -self.mul(&next).expect("square").trace() / rat(k as i64);
            coeffs[n - k] = c;
            aux = next;
        }
        coeffs
    }

    /// Evaluates a polynomial (coefficients low to high) at this matrix.
    pub fn eval_polynomial(&self, poly: &[Rational]) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in poly.iter().rev() {
            acc = acc.mul(self).expect("square");
            for i in 0..n {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A subspace of `Q^n` in canonical form: its basis is the nonzero part of
/// the reduced row-echelon form of any spanning set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalSubspace {
    ambient: usize,
    basis: RationalMatrix,
}

impl RationalSubspace {
    pub fn zero(ambient: usize) -> Self {
        RationalSubspace {
            ambient,
            basis: RationalMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        RationalSubspace {
            ambient,
            basis: RationalMatrix::identity(ambient),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        for v in vectors {
            if v.len() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        let m = RationalMatrix::from_rows_with_cols(vectors.to_vec(), ambient)?;
        Ok(Self::from_row_space(&m))
    }

    /// Span of standard basis vectors `e_i` (zero-based indices).
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vectors: Vec<Vec<Rational>> = indices.iter().map(|&i| unit_vector(ambient, i)).collect();
        Self::span(ambient, &vectors).expect("coordinate indices within ambient dimension")
    }

    pub fn from_row_space(m: &RationalMatrix) -> Self {
        let r = m.rref();
        let k = r.nonzero_rows();
        let rows = (0..k).map(|i| r.row(i).to_vec()).collect();
        RationalSubspace {
            ambient: m.cols(),
            basis: RationalMatrix::from_rows_with_cols(rows, m.cols()).expect("rows have equal length"),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        // Reduce v against the pivots of the RREF basis.
        let mut w = v.to_vec();
        for i in 0..self.dim() {
            let row = self.basis.row(i);
            let pc = row.iter().position(|x| !x.is_zero()).expect("no zero rows");
            if w[pc].is_zero() {
                continue;
            }
            let f = w[pc].clone();
            for (wj, rj) in w.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *wj -= &f * rj;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Self::span(self.ambient, &rows)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        // Coefficient vectors (alpha, beta) with sum alpha_i a_i - sum beta_j b_j = 0.
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors().into_iter().map(|v| v.into_iter().map(|x| -x).collect()));
        let stacked = RationalMatrix::from_rows_with_cols(rows, self.ambient)?;
        let coeffs = stacked.transpose().kernel();
        let p = self.dim();
        let vectors: Vec<Vec<Rational>> = coeffs
            .iter()
            .map(|c| combine(&self.basis, &c[..p]))
            .collect();
        Self::span(self.ambient, &vectors)
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok((0..self.dim()).all(|i| other.contains_vector(self.basis.row(i))))
    }

    /// Image of this subspace under `m` (acting on column vectors).
    pub fn image_under(&self, m: &RationalMatrix) -> Result<Self, LinalgError> {
        if m.cols() != self.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: m.cols(),
            });
        }
        let vectors: Vec<Vec<Rational>> = (0..self.dim()).map(|i| m.apply(self.basis.row(i))).collect();
        Self::span(m.rows(), &vectors)
    }

    /// `{v in self : m v in target}`.
    pub fn preimage_within(&self, m: &RationalMatrix, target: &Self) -> Result<Self, LinalgError> {
        if m.cols() != self.ambient || m.rows() != target.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: m.cols(),
            });
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Coordinates c with m (sum c_i b_i) in target, i.e. the images projected
        // onto a complement of target vanish.
        let annihilator = target.annihilator();
        let images: Vec<Vec<Rational>> = (0..self.dim()).map(|i| m.apply(self.basis.row(i))).collect();
        let mut cond = RationalMatrix::zeros(annihilator.len(), self.dim());
        for (r, f) in annihilator.iter().enumerate() {
            for (c, img) in images.iter().enumerate() {
                cond.set(r, c, dot(f, img));
            }
        }
        let coeffs = cond.kernel();
        let vectors: Vec<Vec<Rational>> = coeffs.iter().map(|c| combine(&self.basis, c)).collect();
        Self::span(self.ambient, &vectors)
    }

    /// Basis of the linear functionals vanishing on this subspace.
    pub fn annihilator(&self) -> Vec<Vec<Rational>> {
        if self.is_zero() {
            return (0..self.ambient).map(|i| unit_vector(self.ambient, i)).collect();
        }
        self.basis.kernel()
    }
}

impl PartialOrd for RationalSubspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: ambient dimension, then dimension, then basis entries.
impl Ord for RationalSubspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| {
                // Larger leading coordinates first so span(e1) < span(e2).
                for (a, b) in self.basis.data.iter().zip(&other.basis.data) {
                    match b.cmp(a) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Display for RationalSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let vs: Vec<String> = self
            .basis_vectors()
            .iter()
            .map(|v| format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "span{{{}}}", vs.join(", "))
    }
}

/// Result of comparing two subspaces of the same ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceRelations {
    pub sum: RationalSubspace,
    pub intersection: RationalSubspace,
    /// `a ⊆ b`.
    pub contained: bool,
    pub equal: bool,
}

pub fn subspace_ops(a: &RationalSubspace, b: &RationalSubspace) -> Result<SubspaceRelations, LinalgError> {
    let sum = a.sum(b)?;
    let intersection = a.intersection(b)?;
    let contained = sum == *b;
    Ok(SubspaceRelations {
        equal: a == b,
        sum,
        intersection,
        contained,
    })
}

/// A bilinear map `V x V -> V` with `map(e_i, e_j) = sum_k t[i][j][k] e_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BilinearMap {
    dim: usize,
    data: Vec<Rational>,
}

impl BilinearMap {
    pub fn zero(dim: usize) -> Self {
        BilinearMap {
            dim,
            data: vec![Rational::zero(); dim * dim * dim],
        }
    }

    pub fn from_flat(dim: usize, data: Vec<Rational>) -> Result<Self, LinalgError> {
        let expected = dim * dim * dim;
        if data.len() != expected {
            return Err(LinalgError::ShapeMismatch {
                expected,
                found: data.len(),
            });
        }
        Ok(BilinearMap { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.data[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Rational) {
        let idx = self.idx(i, j, k);
        self.data[idx] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    /// Nonzero entries as `(i, j, k, value)` in index order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, &Rational)> {
        let n = self.dim;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(idx, v)| (idx / (n * n), (idx / n) % n, idx % n, v))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Output coordinates of `map(e_i, e_j)`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Rational] {
        let start = self.idx(i, j, 0);
        &self.data[start..start + self.dim]
    }

    pub fn apply(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let t = self.get(i, j, k);
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y -> map(e_i, y)`.
    pub fn left_operator(&self, i: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m.set(k, j, self.get(i, j, k).clone());
            }
        }
        m
    }

    /// Matrix of `x -> map(x, e_j)`.
    pub fn right_operator(&self, j: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                m.set(k, i, self.get(i, j, k).clone());
            }
        }
        m
    }

    pub fn map_entries(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        BilinearMap {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `(x, y) -> map(y, x)`.
    pub fn opposite(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    out.set(i, j, k, self.get(j, i, k).clone());
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(BilinearMap {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.add(&other.map_entries(|x| -x))
    }
}

/// Smallest subspace containing `seed` that is closed under `map(x, s)` and
/// `map(s, x)` for every map, every `s` in it and every ambient `x`.
///
/// Fixpoint iteration; the dimension grows strictly until it stops, so there
/// are at most `ambient` rounds.
pub fn bilinear_closure(
    seed: &RationalSubspace,
    maps: &[BilinearMap],
    ambient: usize,
) -> Result<RationalSubspace, LinalgError> {
    if seed.ambient_dim() != ambient {
        return Err(LinalgError::DimensionMismatch {
            expected: ambient,
            found: seed.ambient_dim(),
        });
    }
    for m in maps {
        if m.dim() != ambient {
            return Err(LinalgError::ShapeMismatch {
                expected: ambient * ambient * ambient,
                found: m.entries().len(),
            });
        }
    }
    let mut ops = Vec::with_capacity(2 * ambient * maps.len());
    for m in maps {
        for x in 0..ambient {
            ops.push(m.left_operator(x));
            ops.push(m.right_operator(x));
        }
    }
    operator_closure(seed, &ops)
}

/// Smallest subspace containing `seed` and invariant under every operator.
pub fn operator_closure(
    seed: &RationalSubspace,
    ops: &[RationalMatrix],
) -> Result<RationalSubspace, LinalgError> {
    let mut current = seed.clone();
    loop {
        let mut vectors = current.basis_vectors();
        for op in ops {
            let img = current.image_under(op)?;
            vectors.extend(img.basis_vectors());
        }
        let next = RationalSubspace::span(current.ambient_dim(), &vectors)?;
        if next.dim() == current.dim() {
            return Ok(current);
        }
        current = next;
    }
}

/// Largest subspace of `within` invariant under every operator.
pub fn largest_invariant_subspace(
    within: &RationalSubspace,
    ops: &[RationalMatrix],
) -> Result<RationalSubspace, LinalgError> {
    let mut current = within.clone();
    loop {
        let mut next = current.clone();
        for op in ops {
            next = next.preimage_within(op, &current)?;
        }
        if next.dim() == current.dim() {
            return Ok(current);
        }
        current = next;
    }
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `sum_i c_i * row_i(m)`.
fn combine(m: &RationalMatrix, c: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(m.row(i)) {
            *o += ci * x;
        }
    }
    out
}

/// Distinct rational roots of a polynomial with rational coefficients (low
/// to high), in increasing order, together with the cofactor left after
/// dividing out every rational linear factor with multiplicity.
pub fn rational_roots(poly: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut p = trim(poly.to_vec());
    let mut roots = Vec::new();
    if p.len() <= 1 {
        return (roots, p);
    }
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    loop {
        if p.len() <= 1 {
            break;
        }
        let Some(r) = find_rational_root(&p) else {
            break;
        };
        p = divide_linear(&p, &r);
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    roots.sort();
    (roots, p)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval_poly(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Synthetic division by `(t - r)`; `r` must be a root.
fn divide_linear(p: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = p.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + carry * r;
        q[i] = carry.clone();
    }
    q
}

fn find_rational_root(p: &[Rational]) -> Option<Rational> {
    // Integer coefficients with nonzero constant term.
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    if a0.is_zero() {
        return Some(Rational::zero());
    }
    let num_divs = divisors(&a0);
    let den_divs = divisors(&an);
    for q in &den_divs {
        for n in &num_divs {
            for sign in [1i64, -1] {
                let cand = Rational::new(n * BigInt::from(sign), q.clone());
                if eval_poly(p, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows)
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_examples() {
        assert_eq!(m(&[&[2, 4], &[1, 2]]).rref(), m(&[&[1, 2], &[0, 0]]));
        assert_eq!(RationalMatrix::identity(3).rref(), RationalMatrix::identity(3));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).rref(), m(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn rank_one_collapse_gives_one_basis_row() {
        let s = RationalSubspace::from_row_space(&m(&[&[2, 4], &[1, 2]]));
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis(), &m(&[&[1, 2]]));
    }

    #[test]
    fn subspace_examples() {
        let e1 = RationalSubspace::coordinate(3, &[0]);
        let e2 = RationalSubspace::coordinate(3, &[1]);
        let ops = subspace_ops(&e1, &e2).unwrap();
        assert_eq!(ops.sum, RationalSubspace::coordinate(3, &[0, 1]));
        assert!(ops.intersection.is_zero());
        assert!(!ops.contained);

        let a = RationalSubspace::coordinate(3, &[0, 1]);
        let b = RationalSubspace::coordinate(3, &[1, 2]);
        assert_eq!(a.intersection(&b).unwrap(), e2);

        let r = subspace_ops(&a, &a).unwrap();
        assert!(r.contained && r.equal);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = RationalSubspace::zero(2);
        let b = RationalSubspace::zero(3);
        assert!(matches!(
            subspace_ops(&a, &b),
            Err(LinalgError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn skew_intersection() {
        let a = RationalSubspace::span(3, &[v(&[1, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let b = RationalSubspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 1])]).unwrap();
        let i = a.intersection(&b).unwrap();
        assert_eq!(i, RationalSubspace::span(3, &[v(&[1, 1, 1])]).unwrap());
    }

    #[test]
    fn kernel_and_determinant() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).iter().all(Zero::is_zero));
        assert!(a.determinant().is_zero());
        assert_eq!(m(&[&[2, 1], &[1, 3]]).determinant(), rat(5));
    }

    #[test]
    fn characteristic_polynomial_of_diagonal() {
        // (t - 1)(t + 1) t = t^3 - t
        let d = m(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        assert_eq!(d.characteristic_polynomial(), v(&[0, -1, 0, 1]));
        let (roots, rest) = rational_roots(&d.characteristic_polynomial());
        assert_eq!(roots, v(&[-1, 0, 1]));
        assert_eq!(rest, v(&[1]));
    }

    #[test]
    fn irreducible_quadratic_is_left_over() {
        // t^3 + t = t (t^2 + 1)
        let (roots, rest) = rational_roots(&v(&[0, 1, 0, 1]));
        assert_eq!(roots, v(&[0]));
        assert_eq!(rest, v(&[1, 0, 1]));
        let (roots, _) = rational_roots(&[rat(-1), rat(0), rat(9)]);
        assert_eq!(roots, vec![ratio(-1, 3), ratio(1, 3)]);
    }

    #[test]
    fn closure_of_zero_and_whole() {
        let mut br = BilinearMap::zero(2);
        br.set(0, 1, 1, rat(1));
        br.set(1, 0, 1, rat(-1));
        let z = RationalSubspace::zero(2);
        assert_eq!(bilinear_closure(&z, &[br.clone()], 2).unwrap(), z);
        let f = RationalSubspace::full(2);
        assert_eq!(bilinear_closure(&f, &[br.clone()], 2).unwrap(), f);
        // span(e1) generates the derived part too: [e1, e2] = e2.
        let e1 = RationalSubspace::coordinate(2, &[0]);
        assert_eq!(bilinear_closure(&e1, &[br], 2).unwrap(), f);
    }

    #[test]
    fn closure_rejects_wrong_shape() {
        let br = BilinearMap::zero(3);
        assert!(bilinear_closure(&RationalSubspace::zero(2), &[br], 2).is_err());
    }

    #[test]
    fn largest_invariant_inside_plane() {
        // Rotation-like operator on (e2, e3), fixing e1.
        let r = m(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, 0]]);
        let plane = RationalSubspace::coordinate(3, &[0, 1]);
        let inv = largest_invariant_subspace(&plane, &[r]).unwrap();
        assert_eq!(inv, RationalSubspace::coordinate(3, &[0]));
    }

    #[test]
    fn rational_parsing_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/2"), Some(rat(2)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
