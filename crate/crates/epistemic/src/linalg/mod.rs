//! Exact vectors, matrices, and the subspace lattice of `C^d`.
//!
//! Everything here is generic over [`Scalar`](crate::scalar::Scalar) and
//! computes with exact field arithmetic; there are no tolerances anywhere.

mod subspace;

pub use subspace::Subspace;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("matrix is singular")]
    Singular,
}

/// A dense vector over the scalar field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector<S> {
    entries: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        assert!(!entries.is_empty(), "vector dimension must be positive");
        Vector { entries }
    }

    pub fn zero(dim: usize) -> Self {
        Vector::new(vec![S::zero(); dim])
    }

    /// The standard basis vector `e_k` of `C^dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut entries = vec![S::zero(); dim];
        entries[k] = S::one();
        Vector::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn scaled(&self, c: &S) -> Self {
        Vector::new(self.entries.iter().map(|e| e.clone() * c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_dim(other.dim())?;
        Ok(Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_dim(other.dim())?;
        Ok(Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        ))
    }

    fn check_dim(&self, expected: usize) -> Result<(), LinalgError> {
        if self.dim() != expected {
            return Err(LinalgError::DimensionMismatch { expected, found: self.dim() });
        }
        Ok(())
    }
}

/// The Hermitian inner product, conjugate-linear in the FIRST argument:
/// `⟨u|v⟩ = Σ conj(u_k) v_k`.
pub fn inner<S: Scalar>(u: &Vector<S>, v: &Vector<S>) -> Result<S, LinalgError> {
    if u.dim() != v.dim() {
        return Err(LinalgError::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    Ok(u.entries
        .iter()
        .zip(&v.entries)
        .fold(S::zero(), |acc, (a, b)| acc + a.conj() * b.clone()))
}

/// `⟨v|v⟩`, always real and nonnegative.
pub fn norm_sq<S: Scalar>(v: &Vector<S>) -> S::Real {
    inner(v, v).expect("equal dims").real_part()
}

/// A dense row-major matrix over the scalar field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        Matrix { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let entries = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        Matrix::new(rows, cols, entries)
    }

    /// Stacks vectors as the rows of a matrix.
    pub fn from_rows(rows: &[Vector<S>]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].dim();
        Matrix::from_fn(rows.len(), cols, |i, j| rows[i].entries[j].clone())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vector<S> {
        Vector::new(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(S::zero(), |acc, k| {
                acc + self.get(i, k).clone() * other.get(k, j).clone()
            })
        }))
    }

    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Solves `A x = b` for square invertible `A` by exact Gaussian
    /// elimination with partial (first-nonzero) pivoting.
    pub fn solve(&self, b: &Vector<S>) -> Result<Vector<S>, LinalgError> {
        assert_eq!(self.rows, self.cols, "solve requires a square matrix");
        let n = self.rows;
        if b.dim() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, found: b.dim() });
        }
        let mut a: Vec<Vec<S>> = (0..n)
            .map(|i| {
                let mut row: Vec<S> = self.entries[i * n..(i + 1) * n].to_vec();
                row.push(b.entries[i].clone());
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(LinalgError::Singular)?;
            a.swap(col, pivot);
            let inv = S::one() / a[col][col].clone();
            for e in a[col].iter_mut() {
                *e = e.clone() * inv.clone();
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in col..=n {
                        let delta = factor.clone() * a[col][c].clone();
                        a[r][c] = a[r][c].clone() - delta;
                    }
                }
            }
        }
        Ok(Vector::new(a.into_iter().map(|mut row| row.pop().unwrap()).collect()))
    }
}
