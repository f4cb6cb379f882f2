//! Dense square-or-rectangular matrices over a [`Field`].
//!
//! Products skip zero entries, which matters because every matrix in this
//! crate (R-matrices, L-operator coefficients, their Kronecker embeddings)
//! is sparse.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{Field, Ring};

/// A row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    /// The zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| T::one()).collect())
    }

    /// A diagonal matrix.
    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in d.into_iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// Builds a matrix from an entry function.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; fails on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Whether the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    /// Overwrites entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let c = self.cols;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / c, k % c, v))
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Whether every entry is zero.
    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Whether this is the identity matrix.
    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        *v == T::one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Applies `f` entry-wise.
    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Applies `f(i, j, entry)` entry-wise.
    pub fn map_indexed(&self, f: impl Fn(usize, usize, &T) -> T) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| f(i, j, self.get(i, j)))
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| if v.is_zero() { T::zero() } else { v.mul(c) })
    }

    /// Product; fails on a shape mismatch.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rows: Vec<Vec<T>> = (0..self.rows)
            .into_par_iter()
            .map(|i| {
                let mut row: Vec<Option<T>> = vec![None; other.cols];
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, slot) in row.iter_mut().enumerate() {
                        let b = other.get(k, j);
                        if b.is_zero() {
                            continue;
                        }
                        let p = a.mul(b);
                        *slot = Some(match slot.take() {
                            Some(acc) => acc.add(&p),
                            None => p,
                        });
                    }
                }
                row.into_iter().map(|v| v.unwrap_or_else(T::zero)).collect()
            })
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Entry-wise combination of equally shaped matrices.
    pub fn try_zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Invalid(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Kronecker product `self ⊗ other` (no grading signs).
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut m = Self::zeros(r, c);
        for (i, j, a) in self.nonzero() {
            for (k, l, b) in other.nonzero() {
                m.set(i * other.rows + k, j * other.cols + l, a.mul(b));
            }
        }
        m
    }

    /// The `rows × cols` block whose top-left corner is `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self.get(i0 + i, j0 + j).clone())
    }

    /// Inverse by Gauss–Jordan elimination, choosing the sparsest available
    /// pivot in each column. Fails when the matrix is singular.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotInvertible("non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = Self::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .filter(|&r| !a.get(r, col).is_zero())
                .min_by_key(|&r| (0..n).filter(|&j| !a.get(r, j).is_zero()).count())
                .ok_or_else(|| Error::NotInvertible(format!("no pivot in column {col}")))?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    b.data.swap(piv * n + j, col * n + j);
                }
            }
            let inv = a
                .get(col, col)
                .inv()
                .ok_or_else(|| Error::NotInvertible("zero pivot".into()))?;
            for j in 0..n {
                let x = a.get(col, j);
                if !x.is_zero() {
                    a.set(col, j, x.mul(&inv));
                }
                let y = b.get(col, j);
                if !y.is_zero() {
                    b.set(col, j, y.mul(&inv));
                }
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let x = a.get(col, j);
                    if !x.is_zero() {
                        let v = a.get(r, j).sub(&factor.mul(x));
                        a.set(r, j, v);
                    }
                    let y = b.get(col, j);
                    if !y.is_zero() {
                        let v = b.get(r, j).sub(&factor.mul(y));
                        b.set(r, j, v);
                    }
                }
            }
        }
        Ok(b)
    }

    /// Positions where two equally shaped matrices differ.
    pub fn diff_cells(&self, other: &Self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows.min(other.rows) {
            for j in 0..self.cols.min(other.cols) {
                if self.get(i, j) != other.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl<T: Field> Ring for Matrix<T> {
    fn is_zero(&self) -> bool {
        self.is_zero_matrix()
    }

    fn add(&self, other: &Self) -> Self {
        self.try_zip(other, |a, b| a.add(b)).expect("matrix shapes agree")
    }

    fn sub(&self, other: &Self) -> Self {
        self.try_zip(other, |a, b| a.sub(b)).expect("matrix shapes agree")
    }

    fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix shapes agree")
    }
}

impl<T: Field + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
