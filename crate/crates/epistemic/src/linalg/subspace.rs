//! Linear subspaces of `C^d` in canonical reduced-row-echelon form.
//!
//! The canonical basis is the unique RREF spanning set (pivot entries 1,
//! zeros above and below each pivot, strictly increasing pivot columns), so
//! subspace equality is plain structural equality of the basis.

use super::{inner, LinalgError, Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<S> {
    ambient_dim: usize,
    basis: Vec<Vector<S>>,
}

/// In-place reduced row echelon form with leftmost-pivot, first-nonzero-row
/// pivoting. Returns the nonzero rows.
fn rref<S: Scalar>(mut rows: Vec<Vec<S>>, dim: usize) -> Vec<Vec<S>> {
    let mut rank = 0;
    for col in 0..dim {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = S::one() / rows[rank][col].clone();
        for e in rows[rank].iter_mut() {
            *e = e.clone() * inv.clone();
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (e, p) in row.iter_mut().zip(&pivot_row) {
                    *e = e.clone() - factor.clone() * p.clone();
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

impl<S: Scalar> Subspace<S> {
    /// Canonical representative of the span of `vectors` in `C^ambient_dim`.
    ///
    /// Idempotent, order-independent, and invariant under nonzero scaling of
    /// any input. An empty list yields the zero subspace.
    pub fn canonicalize(vectors: &[Vector<S>], ambient_dim: usize) -> Result<Self, LinalgError> {
        assert!(ambient_dim > 0, "ambient dimension must be positive");
        for v in vectors {
            if v.dim() != ambient_dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.dim(),
                });
            }
        }
        let rows = vectors.iter().map(|v| v.entries().to_vec()).collect();
        let basis = rref(rows, ambient_dim).into_iter().map(Vector::new).collect();
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        assert!(ambient_dim > 0);
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|k| Vector::basis(ambient_dim, k)).collect();
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    /// Membership test: `v ∈ span(self)`. The zero vector is in every
    /// subspace.
    pub fn contains(&self, v: &Vector<S>) -> Result<bool, LinalgError> {
        if v.dim() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.dim(),
            });
        }
        // Reduce v against the RREF basis; membership iff the residual is 0.
        let mut residual = v.entries().to_vec();
        for row in &self.basis {
            let pivot = row.entries().iter().position(|e| !e.is_zero()).expect("nonzero row");
            let factor = residual[pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (r, b) in residual.iter_mut().zip(row.entries()) {
                *r = r.clone() - factor.clone() * b.clone();
            }
        }
        Ok(residual.iter().all(|e| e.is_zero()))
    }

    /// Subspace inclusion `self ⊆ other`.
    pub fn leq(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lattice join: the span of the union.
    pub fn join(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace::canonicalize(&vectors, self.ambient_dim)
    }

    /// Lattice meet, computed as `(S^⊥ ∨ T^⊥)^⊥`.
    pub fn meet(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other)?;
        Ok(self
            .orthocomplement()
            .join(&other.orthocomplement())?
            .orthocomplement())
    }

    /// The orthogonal complement `{x : ⟨b|x⟩ = 0 for every basis vector b}`.
    pub fn orthocomplement(&self) -> Self {
        let dim = self.ambient_dim;
        if self.basis.is_empty() {
            return Subspace::full(dim);
        }
        // ⟨b|x⟩ = Σ conj(b_k) x_k, so x ranges over the null space of the
        // matrix with rows conj(b). Conjugating an RREF basis leaves it in
        // RREF (pivots are 1), so the null space reads off directly.
        let rows: Vec<Vec<S>> = self
            .basis
            .iter()
            .map(|b| b.entries().iter().map(|e| e.conj()).collect())
            .collect();
        let pivots: Vec<usize> = rows
            .iter()
            .map(|r| r.iter().position(|e| !e.is_zero()).expect("nonzero row"))
            .collect();
        let mut nullspace = Vec::new();
        for free in (0..dim).filter(|c| !pivots.contains(c)) {
            let mut x = vec![S::zero(); dim];
            x[free] = S::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                x[p] = S::zero() - row[free].clone();
            }
            nullspace.push(Vector::new(x));
        }
        Subspace::canonicalize(&nullspace, dim).expect("dims agree")
    }

    /// Orthogonal projection of `v` onto the subspace, solved exactly through
    /// the Gram system of the basis (no orthonormalization, no square roots).
    pub fn project(&self, v: &Vector<S>) -> Result<Vector<S>, LinalgError> {
        if v.dim() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.dim(),
            });
        }
        let k = self.rank();
        if k == 0 {
            return Ok(Vector::zero(self.ambient_dim));
        }
        let gram = Matrix::from_fn(k, k, |i, j| {
            inner(&self.basis[i], &self.basis[j]).expect("equal dims")
        });
        let rhs = Vector::new(
            self.basis
                .iter()
                .map(|b| inner(b, v).expect("equal dims"))
                .collect(),
        );
        let coeffs = gram.solve(&rhs).expect("Gram matrix of independent basis is invertible");
        let mut w = Vector::zero(self.ambient_dim);
        for (c, b) in coeffs.entries().iter().zip(&self.basis) {
            w = w.add(&b.scaled(c)).expect("equal dims");
        }
        Ok(w)
    }

    fn check_ambient(&self, other: &Self) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }
}
