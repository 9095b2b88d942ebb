//! LU with partial pivoting and a one-sided Jacobi SVD.
//!
//! The SVD works directly on the columns of `A` (Hestenes' method), so small
//! singular values are resolved to working precision instead of being
//! squared away as in an eigen-decomposition of `A^T A`.

use super::matrix::Matrix;
use super::tolerance::Tolerance;
use super::KernelError;
use crate::scalar::Real;

pub struct Lu<T: Real> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self, KernelError> {
        if !a.is_square() {
            return Err(KernelError::NotSquare(a.rows(), a.cols()));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= T::epsilon() * scale * T::c(n as f64) || pivot == T::zero() {
                return Err(KernelError::Singular);
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &Matrix<T>) -> Matrix<T> {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n);
        let mut x = Matrix::zeros(n, b.cols());
        for c in 0..b.cols() {
            let mut y: Vec<T> = self.perm.iter().map(|&p| b[(p, c)]).collect();
            for i in 0..n {
                for k in 0..i {
                    let l = self.lu[(i, k)];
                    y[i] = y[i] - l * y[k];
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let u = self.lu[(i, k)];
                    y[i] = y[i] - u * y[k];
                }
                y[i] /= self.lu[(i, i)];
            }
            for i in 0..n {
                x[(i, c)] = y[i];
            }
        }
        x
    }
}

pub fn inverse<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>, KernelError> {
    let lu = Lu::new(a)?;
    Ok(lu.solve(&Matrix::identity(a.rows())))
}

/// Solves `A X = B` for square `A`.
pub fn solve<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, KernelError> {
    Ok(Lu::new(a)?.solve(b))
}

/// Thin singular value decomposition `A = U diag(s) V^T`, singular values
/// sorted in decreasing order. `U` is `m x n`, `V` is `n x n`; columns of `U`
/// belonging to zero singular values are left as zero vectors.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub u: Matrix<T>,
    pub singular_values: Vec<T>,
    pub v: Matrix<T>,
}

#[allow(clippy::needless_range_loop)]
pub fn svd<T: Real>(a: &Matrix<T>) -> Svd<T> {
    let (m, n) = (a.rows(), a.cols());
    // column-major working copies
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| a.col(j)).collect();
    let mut vcols: Vec<Vec<T>> = (0..n).map(|j| super::matrix::unit_vector(n, j)).collect();
    let eps = T::epsilon();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: T = cols[p].iter().map(|&x| x * x).sum();
                let beta: T = cols[q].iter().map(|&x| x * x).sum();
                let gamma: T = cols[p].iter().zip(&cols[q]).map(|(&x, &y)| x * y).sum();
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::c(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (cols[p][i], cols[q][i]);
                    cols[p][i] = c * x - s * y;
                    cols[q][i] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (vcols[p][i], vcols[q][i]);
                    vcols[p][i] = c * x - s * y;
                    vcols[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(T, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (super::matrix::norm(c), j))
        .collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut u = Matrix::zeros(m, n);
    let mut v = Matrix::zeros(n, n);
    let mut sv = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sv.push(s);
        for i in 0..n {
            v[(i, k)] = vcols[j][i];
        }
        if s > T::zero() {
            for i in 0..m {
                u[(i, k)] = cols[j][i] / s;
            }
        }
    }
    Svd {
        u,
        singular_values: sv,
        v,
    }
}

impl<T: Real> Svd<T> {
    /// Singular values below `abs_eps + rel_eps * sigma_max` count as zero.
    pub fn cutoff(&self, tol: &Tolerance<T>) -> T {
        let smax = self.singular_values.first().copied().unwrap_or(T::zero());
        tol.threshold(smax)
    }

    pub fn rank(&self, tol: &Tolerance<T>) -> usize {
        let c = self.cutoff(tol);
        self.singular_values.iter().filter(|&&s| s > c).count()
    }
}

pub fn rank<T: Real>(a: &Matrix<T>, tol: &Tolerance<T>) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    svd(a).rank(tol)
}

/// Orthonormal basis of the numerical null space of `a`.
pub fn nullspace<T: Real>(a: &Matrix<T>, tol: &Tolerance<T>) -> Vec<Vec<T>> {
    let n = a.cols();
    if a.rows() == 0 {
        return (0..n).map(|j| super::matrix::unit_vector(n, j)).collect();
    }
    let d = svd(a);
    let r = d.rank(tol);
    (r..n).map(|k| d.v.col(k)).collect()
}

/// Orthonormal basis for the span of the given vectors (each of length `dim`).
pub fn orthonormal_span<T: Real>(dim: usize, vectors: &[Vec<T>], tol: &Tolerance<T>) -> Vec<Vec<T>> {
    if vectors.is_empty() || dim == 0 {
        return Vec::new();
    }
    let a = Matrix::from_columns(dim, vectors);
    let d = svd(&a);
    let r = d.rank(tol);
    let mut basis: Vec<Vec<T>> = (0..r).map(|k| d.u.col(k)).collect();
    // one Gram-Schmidt pass to clean residual non-orthogonality
    for i in 0..basis.len() {
        for j in 0..i {
            let c = super::matrix::dot(&basis[i], &basis[j]);
            let bj = basis[j].clone();
            super::matrix::axpy(-c, &bj, &mut basis[i]);
        }
        let nrm = super::matrix::norm(&basis[i]);
        basis[i] = super::matrix::scaled(T::one() / nrm, &basis[i]);
    }
    basis
}

/// Moore-Penrose pseudo-inverse with the same rank cutoff as [`rank`].
pub fn pseudo_inverse<T: Real>(a: &Matrix<T>, tol: &Tolerance<T>) -> Matrix<T> {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 {
        return Matrix::zeros(n, m);
    }
    let d = svd(a);
    let r = d.rank(tol);
    let mut p = Matrix::zeros(n, m);
    for k in 0..r {
        let s = d.singular_values[k];
        for i in 0..n {
            for j in 0..m {
                p[(i, j)] += d.v[(i, k)] * d.u[(j, k)] / s;
            }
        }
    }
    p
}

/// Largest singular value.
pub fn operator_norm<T: Real>(a: &Matrix<T>) -> T {
    if a.rows() == 0 || a.cols() == 0 {
        return T::zero();
    }
    svd(a).singular_values[0]
}
