//! Matrix symmetric pairs of the model zoo.

use crate::numkernel::{Matrix, Tolerance};
use crate::scalar::Real;
use crate::sympair::{MatrixSymmetricPair, PairError, SigmaRule};

fn skew<T: Real>(n: usize, i: usize, j: usize) -> Matrix<T> {
    &Matrix::unit(n, i, j) - &Matrix::unit(n, j, i)
}

/// `SO(n+1)` with `sigma` = conjugation by `diag(1, .., 1, -1)`. Since `K` is
/// all of `G^sigma`, `M` is `RP^n` (the sphere modulo antipodes).
/// `g-` basis: `E_{i,n} - E_{n,i}`.
pub fn sphere<T: Real>(n: usize, tol: &Tolerance<T>) -> Result<MatrixSymmetricPair<T>, PairError> {
    if n == 0 {
        return Err(PairError::Invalid("sphere dimension must be at least 1".into()));
    }
    let m = n + 1;
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(skew(m, i, j));
        }
    }
    for i in 0..n {
        basis.push(skew(m, i, n));
    }
    let mut d = vec![T::one(); m];
    d[n] = -T::one();
    MatrixSymmetricPair::new(
        m,
        basis,
        SigmaRule::Conjugation {
            theta_matrix: Matrix::diag(&d),
        },
        format!("sphere({n})"),
        tol,
    )
}

/// `GL(n)` with `sigma(g) = (g^T)^{-1}`; `M` = positive definite matrices.
/// `g-` basis: `E_ii`, then `E_ij + E_ji` for `i < j`.
pub fn spd<T: Real>(n: usize, tol: &Tolerance<T>) -> Result<MatrixSymmetricPair<T>, PairError> {
    if n == 0 {
        return Err(PairError::Invalid("spd size must be at least 1".into()));
    }
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            basis.push(skew(n, i, j));
        }
    }
    for i in 0..n {
        basis.push(Matrix::unit(n, i, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            basis.push(&Matrix::unit(n, i, j) + &Matrix::unit(n, j, i));
        }
    }
    MatrixSymmetricPair::new(n, basis, SigmaRule::TransposeInverse, format!("spd({n})"), tol)
}

/// `SO(n)` with `sigma` = conjugation by `diag(I_k, -I_{n-k})`; `M` = k-planes in `R^n`.
pub fn grassmann<T: Real>(k: usize, n: usize, tol: &Tolerance<T>) -> Result<MatrixSymmetricPair<T>, PairError> {
    if k == 0 || k >= n {
        return Err(PairError::Invalid(format!("grassmann needs 0 < k < n (got k={k}, n={n})")));
    }
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (i < k) == (j < k) {
                basis.push(skew(n, i, j));
            }
        }
    }
    for i in 0..k {
        for j in k..n {
            basis.push(skew(n, i, j));
        }
    }
    let d: Vec<T> = (0..n).map(|i| if i < k { T::one() } else { -T::one() }).collect();
    MatrixSymmetricPair::new(
        n,
        basis,
        SigmaRule::Conjugation {
            theta_matrix: Matrix::diag(&d),
        },
        format!("grassmann({k},{n})"),
        tol,
    )
}

/// Two commuting plane rotations in `4 x 4` blocks, `sigma` = conjugation by
/// `diag(1, -1, 1, -1)`; `g = g-` is abelian and `M` is a 2-torus with
/// `Exp(v) = b` exactly for `v` in `pi Z^2`.
pub fn torus<T: Real>(tol: &Tolerance<T>) -> Result<MatrixSymmetricPair<T>, PairError> {
    let j1 = skew(4, 0, 1);
    let j2 = skew(4, 2, 3);
    MatrixSymmetricPair::new(
        4,
        vec![j1, j2],
        SigmaRule::Conjugation {
            theta_matrix: Matrix::diag(&[T::one(), -T::one(), T::one(), -T::one()]),
        },
        "torus",
        tol,
    )
}

/// Block-diagonal product of two pairs.
pub fn product<T: Real>(
    a: &MatrixSymmetricPair<T>,
    b: &MatrixSymmetricPair<T>,
    tol: &Tolerance<T>,
) -> Result<MatrixSymmetricPair<T>, PairError> {
    let (na, nb) = (a.ambient_n(), b.ambient_n());
    let mut basis: Vec<Matrix<T>> = a
        .basis()
        .iter()
        .map(|x| Matrix::block_diag(x, &Matrix::zeros(nb, nb)))
        .collect();
    basis.extend(b.basis().iter().map(|x| Matrix::block_diag(&Matrix::zeros(na, na), x)));
    MatrixSymmetricPair::new(
        na + nb,
        basis,
        SigmaRule::product(a.sigma(), na, b.sigma(), nb),
        format!("product({},{})", a.label(), b.label()),
        tol,
    )
}

/// The one-point space: `1 x 1` matrices with zero algebra.
pub fn trivial<T: Real>(tol: &Tolerance<T>) -> Result<MatrixSymmetricPair<T>, PairError> {
    MatrixSymmetricPair::new(
        1,
        Vec::new(),
        SigmaRule::Conjugation {
            theta_matrix: Matrix::identity(1),
        },
        "point",
        tol,
    )
}
