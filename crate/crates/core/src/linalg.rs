//! Dense exact linear algebra: matrices, reduced row echelon forms, kernels and
//! subspaces kept in canonical (reduced echelon) form.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::rational::{to_compact_string, Rational};

/// A dense `rows × cols` matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "row length mismatch");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]` (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
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

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        let mut out = vec![Rational::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(cols: usize, blocks: &[&Matrix]) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    /// Places matrices side by side.
    pub fn hstack(rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    out.data[i * cols + offset + j] = b.get(i, j).clone();
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Block-diagonal matrix with the given blocks.
    pub fn block_diagonal(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `I_n ⊗ self`: the same map applied independently to `n` coordinates.
    pub fn repeat_diagonal(&self, n: usize) -> Matrix {
        let blocks: Vec<&Matrix> = (0..n).map(|_| self).collect();
        Matrix::block_diagonal(&blocks)
    }

    pub fn rank(&self) -> usize {
        Echelon::from_vectors(self.cols, self.row_vectors()).rank()
    }

    /// Basis of `{v : self · v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let ech = Echelon::from_vectors(self.cols, self.row_vectors());
        ech.null_space()
    }

    /// Column space in canonical form.
    pub fn column_space(&self) -> Echelon {
        Echelon::from_vectors(self.rows, self.columns())
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Solves `self · X = rhs`. Returns `None` when the system is inconsistent;
    /// free variables are set to zero when the solution is not unique.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in linear solve");
        let n = self.cols;
        let width = n + rhs.cols;
        let augmented: Vec<Vec<Rational>> =
            (0..self.rows).map(|i| self.row(i).iter().chain(rhs.row(i)).cloned().collect()).collect();
        let ech = Echelon::from_vectors(width, augmented);
        let mut x = Matrix::zeros(n, rhs.cols);
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if p >= n {
                return None;
            }
            for j in 0..rhs.cols {
                x.set(p, j, row[n + j].clone());
            }
        }
        Some(x)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", to_compact_string(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A subspace of `Q^dim` stored by its reduced row echelon basis, so two
/// subspaces are equal exactly when their `Echelon`s are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn empty(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self::from_vectors(dim, Matrix::identity(dim).row_vectors())
    }

    pub fn from_vectors<I>(dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let mut e = Self::empty(dim);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_all(&self, other: &Echelon) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Coefficients of `v` against [`Self::basis`], if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v` to the spanning set. Returns `true` when the rank grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        let mut v = self.reduce(&v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        if !lead.is_one() {
            let inv = lead.recip();
            for x in v.iter_mut().skip(p) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v).skip(p) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn sum(&self, other: &Echelon) -> Echelon {
        let mut out = self.clone();
        for v in &other.rows {
            out.insert(v.clone());
        }
        out
    }

    /// Basis of the orthogonal complement of the row space, i.e. the kernel of
    /// the matrix whose rows are [`Self::basis`].
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![Rational::zero(); self.dim];
                v[free] = Rational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if !row[free].is_zero() {
                        v[p] = -row[free].clone();
                    }
                }
                v
            })
            .collect()
    }

    pub fn intersection(&self, other: &Echelon) -> Echelon {
        assert_eq!(self.dim, other.dim);
        // v = Σ a_i s_i = Σ b_j t_j  ⇔  [S^T | -T^T] (a, b) = 0
        let mut columns: Vec<Vec<Rational>> = self.rows.clone();
        columns.extend(other.rows.iter().map(|t| t.iter().map(|x| -x).collect()));
        if columns.is_empty() {
            return Echelon::empty(self.dim);
        }
        let system = Matrix::from_columns(self.dim, &columns);
        let k = self.rows.len();
        let vectors = system.kernel().into_iter().map(|coeffs| {
            let mut v = vec![Rational::zero(); self.dim];
            for (a, s) in coeffs[..k].iter().zip(&self.rows) {
                if a.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(s) {
                    *x += a * y;
                }
            }
            v
        });
        Echelon::from_vectors(self.dim, vectors)
    }

    /// Image of this subspace under `map` (a matrix with `cols == dim`).
    pub fn image(&self, map: &Matrix) -> Echelon {
        assert_eq!(map.cols(), self.dim);
        Echelon::from_vectors(map.rows(), self.rows.iter().map(|v| map.mul_vec(v)))
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.dim, &self.rows)
    }
}
