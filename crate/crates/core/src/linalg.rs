//! Dense matrices and Gaussian elimination over any [`Field`].

use crate::error::{Error, Result};
use crate::field::Field;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(rows * cols, data.len());
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let data = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Matrix { rows, cols, data }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<E>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols, |r, c| columns[c][r].clone())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { field.one() } else { field.zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                    field.add(&acc, &field.mul(a, b))
                })
            })
            .collect()
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).fold(field.zero(), |acc, i| {
                field.add(&acc, &field.mul(self.get(r, i), other.get(i, c)))
            })
        })
    }

    pub fn count_nonzero<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.data.iter().filter(|e| !field.is_zero(e)).count()
    }
}

/// Row rank by forward elimination.
pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    let mut a = m.data.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !field.is_zero(&a[r * cols + c])) else {
            continue;
        };
        for k in 0..cols {
            a.swap(rank * cols + k, pivot * cols + k);
        }
        let inv = field.inv(&a[rank * cols + c]).expect("pivot is nonzero");
        for r in rank + 1..rows {
            let factor = field.mul(&a[r * cols + c], &inv);
            if field.is_zero(&factor) {
                continue;
            }
            for k in c..cols {
                let t = field.mul(&factor, &a[rank * cols + k]);
                a[r * cols + k] = field.sub(&a[r * cols + k], &t);
            }
        }
        rank += 1;
    }
    rank
}

/// Gauss-Jordan inverse of a square matrix; `DivisionByZero` when singular.
pub fn inverse<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let mut a = m.data.clone();
    let mut inv = Matrix::identity(field, n).data;
    for c in 0..n {
        let pivot = (c..n)
            .find(|&r| !field.is_zero(&a[r * n + c]))
            .ok_or(Error::DivisionByZero)?;
        for k in 0..n {
            a.swap(c * n + k, pivot * n + k);
            inv.swap(c * n + k, pivot * n + k);
        }
        let pinv = field.inv(&a[c * n + c])?;
        for k in 0..n {
            a[c * n + k] = field.mul(&a[c * n + k], &pinv);
            inv[c * n + k] = field.mul(&inv[c * n + k], &pinv);
        }
        for r in 0..n {
            if r == c || field.is_zero(&a[r * n + c]) {
                continue;
            }
            let factor = a[r * n + c].clone();
            for k in 0..n {
                let t = field.mul(&factor, &a[c * n + k]);
                a[r * n + k] = field.sub(&a[r * n + k], &t);
                let t = field.mul(&factor, &inv[c * n + k]);
                inv[r * n + k] = field.sub(&inv[r * n + k], &t);
            }
        }
    }
    Ok(Matrix::new(n, n, inv))
}

/// Incrementally built row-echelon basis of a subspace of `K^n`.
#[derive(Debug, Clone)]
pub struct EchelonBasis<E> {
    dim: usize,
    // (pivot column, row normalized so that row[pivot] = 1)
    rows: Vec<(usize, Vec<E>)>,
}

impl<E: Clone> EchelonBasis<E> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::with_capacity(dim),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn clear(&mut self) {
        self.rows.clear();
    }

    /// Reduces `v` against the basis; adds it and returns `true` if independent.
    pub fn insert<F: Field<Elem = E>>(&mut self, field: &F, mut v: Vec<E>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        for (pivot, row) in &self.rows {
            let c = v[*pivot].clone();
            if field.is_zero(&c) {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = field.sub(x, &field.mul(&c, r));
            }
        }
        let Some(pivot) = v.iter().position(|x| !field.is_zero(x)) else {
            return false;
        };
        let inv = field.inv(&v[pivot]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = field.mul(x, &inv);
        }
        self.rows.push((pivot, v));
        true
    }
}
