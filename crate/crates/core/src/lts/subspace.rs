use serde::{Deserialize, Serialize};

use crate::numkernel::{axpy, dot, norm, nullspace, orthonormal_span, unit_vector, Matrix, Tolerance};
use crate::scalar::Real;

/// Subspace of a coordinate space, held by an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LinearSubspace<T: Real> {
    ambient_dim: usize,
    basis: Vec<Vec<T>>,
}

impl<T: Real> LinearSubspace<T> {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: &[Vec<T>], tol: &Tolerance<T>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient_dim), "vector length mismatch");
        Self {
            ambient_dim,
            basis: orthonormal_span(ambient_dim, vectors, tol),
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect(),
        }
    }

    /// Span of the coordinate axes with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        Self {
            ambient_dim,
            basis: indices.iter().map(|&i| unit_vector(ambient_dim, i)).collect(),
        }
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    /// `ambient_dim x dim` matrix with the basis as columns.
    pub fn basis_matrix(&self) -> Matrix<T> {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    /// Coefficients of the orthogonal projection of `v` in this basis.
    pub fn coordinates(&self, v: &[T]) -> Vec<T> {
        self.basis.iter().map(|b| dot(b, v)).collect()
    }

    /// Linear combination of the basis vectors.
    pub fn combine(&self, coeffs: &[T]) -> Vec<T> {
        assert_eq!(coeffs.len(), self.dim());
        let mut out = vec![T::zero(); self.ambient_dim];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            axpy(*c, b, &mut out);
        }
        out
    }

    pub fn project(&self, v: &[T]) -> Vec<T> {
        self.combine(&self.coordinates(v))
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &[T]) -> T {
        let p = self.project(v);
        norm(&crate::numkernel::sub(v, &p))
    }

    pub fn contains(&self, v: &[T], tol: &Tolerance<T>) -> bool {
        tol.is_zero(self.residual(v), norm(v))
    }

    pub fn contains_subspace(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        other.basis.iter().all(|b| self.contains(b, tol))
    }

    pub fn same_span(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other, tol)
    }

    pub fn sum(&self, other: &Self, tol: &Tolerance<T>) -> Self {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.ambient_dim, &all, tol)
    }

    /// Orthogonal complement in coordinates.
    pub fn complement(&self, tol: &Tolerance<T>) -> Self {
        if self.basis.is_empty() {
            return Self::full(self.ambient_dim);
        }
        let a = Matrix::from_columns(self.ambient_dim, &self.basis).transpose();
        Self {
            ambient_dim: self.ambient_dim,
            basis: nullspace(&a, tol),
        }
    }

    pub fn intersection(&self, other: &Self, tol: &Tolerance<T>) -> Self {
        // x in both iff x is orthogonal to both complements
        let mut rows = self.complement(tol).basis;
        rows.extend(other.complement(tol).basis);
        if rows.is_empty() {
            return Self::full(self.ambient_dim);
        }
        let a = Matrix::from_columns(self.ambient_dim, &rows).transpose();
        Self {
            ambient_dim: self.ambient_dim,
            basis: nullspace(&a, tol),
        }
    }

    /// Image under a linear map given as a matrix.
    pub fn image(&self, map: &Matrix<T>, tol: &Tolerance<T>) -> Self {
        assert_eq!(map.cols(), self.ambient_dim);
        let imgs: Vec<Vec<T>> = self.basis.iter().map(|b| map.matvec(b)).collect();
        Self::span(map.rows(), &imgs, tol)
    }

    /// `{x : map x in self}`.
    pub fn preimage(&self, map: &Matrix<T>, tol: &Tolerance<T>) -> LinearSubspace<T> {
        assert_eq!(map.rows(), self.ambient_dim);
        let comp = self.complement(tol);
        let n = map.cols();
        if comp.dim() == 0 {
            return Self::full(n);
        }
        let p = Matrix::from_columns(self.ambient_dim, &comp.basis).transpose().matmul(map);
        LinearSubspace {
            ambient_dim: n,
            basis: nullspace(&p, tol),
        }
    }
}
