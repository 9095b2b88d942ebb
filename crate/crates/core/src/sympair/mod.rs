//! Matrix symmetric pairs `(G, sigma, K)` with `K = G^sigma`.
//!
//! `G` is the connected matrix group generated by `exp` of the algebra basis;
//! it is never enumerated.

mod morphism;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lts::{is_lie_ideal, LinearSubspace, LtsError, SymmetricLieAlgebra};
use crate::numkernel::{inverse, mat_exp, mat_log, pseudo_inverse, rank, KernelError, Matrix, Tolerance};
use crate::scalar::Real;

pub use morphism::{GroupMap, PairMorphism};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairError {
    #[error("group element is singular")]
    Singular,
    #[error("matrix is not in the algebra (residual {0:e})")]
    NotInAlgebra(f64),
    #[error("algebra basis is not closed under the commutator (residual {0:e})")]
    NotClosed(f64),
    #[error("algebra basis is linearly dependent")]
    DependentBasis,
    #[error("sigma does not induce an involution of the algebra")]
    NotInvolution,
    #[error("derivative of sigma differs from theta (residual {0:e})")]
    SigmaMismatch(f64),
    #[error("subspace is not a Lie ideal of the algebra")]
    NotIdeal,
    #[error("relation coordinate left L (residual {0:e})")]
    LeftIdeal(f64),
    #[error("malformed word: {0}")]
    Word(String),
    #[error("invalid morphism: {0}")]
    Morphism(String),
    #[error("invalid pair: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Group-level involution.
///
/// `Composite` is `g -> Theta (g^T)^{-1} Theta^{-1}`; it is used for products
/// that mix the other two forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound = "")]
pub enum SigmaRule<T: Real> {
    Conjugation { theta_matrix: Matrix<T> },
    TransposeInverse,
    Composite { theta_matrix: Matrix<T> },
}

impl<T: Real> SigmaRule<T> {
    fn theta_inverse(&self) -> Result<Option<Matrix<T>>, PairError> {
        match self {
            SigmaRule::Conjugation { theta_matrix } | SigmaRule::Composite { theta_matrix } => {
                Ok(Some(inverse(theta_matrix)?))
            }
            SigmaRule::TransposeInverse => Ok(None),
        }
    }

    /// Derivative of the rule at the identity.
    pub fn on_algebra(&self, x: &Matrix<T>, theta_inv: Option<&Matrix<T>>) -> Matrix<T> {
        match (self, theta_inv) {
            (SigmaRule::Conjugation { theta_matrix }, Some(ti)) => theta_matrix.matmul(x).matmul(ti),
            (SigmaRule::TransposeInverse, _) => -&x.transpose(),
            (SigmaRule::Composite { theta_matrix }, Some(ti)) => {
                -&theta_matrix.matmul(&x.transpose()).matmul(ti)
            }
            _ => unreachable!("theta inverse cached for conjugation rules"),
        }
    }

    pub fn on_group(&self, g: &Matrix<T>, theta_inv: Option<&Matrix<T>>) -> Result<Matrix<T>, PairError> {
        match (self, theta_inv) {
            (SigmaRule::Conjugation { theta_matrix }, Some(ti)) => Ok(theta_matrix.matmul(g).matmul(ti)),
            (SigmaRule::TransposeInverse, _) => Ok(inverse(&g.transpose()).map_err(|_| PairError::Singular)?),
            (SigmaRule::Composite { theta_matrix }, Some(ti)) => {
                let git = inverse(&g.transpose()).map_err(|_| PairError::Singular)?;
                Ok(theta_matrix.matmul(&git).matmul(ti))
            }
            _ => unreachable!("theta inverse cached for conjugation rules"),
        }
    }

    /// Rule on a block-diagonal product. Mixed products use the composite
    /// form, which agrees with conjugation only on orthogonal blocks.
    pub fn product(a: &Self, na: usize, b: &Self, nb: usize) -> Self {
        use SigmaRule::*;
        match (a, b) {
            (TransposeInverse, TransposeInverse) => TransposeInverse,
            (Conjugation { theta_matrix: ta }, Conjugation { theta_matrix: tb }) => Conjugation {
                theta_matrix: Matrix::block_diag(ta, tb),
            },
            _ => {
                let block = |r: &Self, n: usize| match r {
                    Conjugation { theta_matrix } | Composite { theta_matrix } => theta_matrix.clone(),
                    TransposeInverse => Matrix::identity(n),
                };
                Composite {
                    theta_matrix: Matrix::block_diag(&block(a, na), &block(b, nb)),
                }
            }
        }
    }
}

/// Serialized form `{ambient_n, algebra_basis, sigma: {kind, theta_matrix?}, label}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PairDescriptor<T: Real> {
    pub ambient_n: usize,
    pub algebra_basis: Vec<Matrix<T>>,
    pub sigma: SigmaRule<T>,
    pub label: String,
}

/// A matrix symmetric pair. The stored basis is adapted to `theta`: `g+`
/// vectors first, then `g-`, so `theta` is diagonal in these coordinates.
#[derive(Debug, Clone)]
pub struct MatrixSymmetricPair<T: Real> {
    ambient_n: usize,
    basis: Vec<Matrix<T>>,
    sigma: SigmaRule<T>,
    theta_inv: Option<Matrix<T>>,
    algebra: SymmetricLieAlgebra<T>,
    /// Least-squares coordinate map `vec(X) -> coefficients`.
    coord_map: Matrix<T>,
    basis_scale: T,
    label: String,
    tol: Tolerance<T>,
}

impl<T: Real> PartialEq for MatrixSymmetricPair<T> {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.ambient_n == other.ambient_n && self.basis == other.basis
    }
}

fn stack<T: Real>(n: usize, mats: &[Matrix<T>]) -> Matrix<T> {
    Matrix::from_columns(n * n, &mats.iter().map(Matrix::to_vec).collect::<Vec<_>>())
}

impl<T: Real> MatrixSymmetricPair<T> {
    pub fn new(
        ambient_n: usize,
        basis: Vec<Matrix<T>>,
        sigma: SigmaRule<T>,
        label: impl Into<String>,
        tol: &Tolerance<T>,
    ) -> Result<Self, PairError> {
        let label = label.into();
        if basis.iter().any(|b| b.rows() != ambient_n || b.cols() != ambient_n) {
            return Err(PairError::Invalid(format!("basis matrices must be {ambient_n}x{ambient_n}")));
        }
        if let SigmaRule::Conjugation { theta_matrix } | SigmaRule::Composite { theta_matrix } = &sigma {
            if theta_matrix.rows() != ambient_n || !theta_matrix.is_square() {
                return Err(PairError::Invalid("theta matrix has the wrong size".into()));
            }
            let sq = theta_matrix.matmul(theta_matrix);
            let id = Matrix::identity(ambient_n);
            if sq.dist(&id) > tol.threshold(T::one()) && sq.dist(&-&id) > tol.threshold(T::one()) {
                return Err(PairError::Invalid("theta matrix must square to +I or -I".into()));
            }
        }
        let theta_inv = sigma.theta_inverse()?;
        let d = basis.len();
        if d > 0 && rank(&stack(ambient_n, &basis), tol) < d {
            return Err(PairError::DependentBasis);
        }
        let basis = Self::adapt(ambient_n, basis, &sigma, theta_inv.as_ref(), tol)?;
        let b = stack(ambient_n, &basis);
        let coord_map = if d == 0 {
            Matrix::zeros(0, ambient_n * ambient_n)
        } else {
            pseudo_inverse(&b, tol)
        };
        let basis_scale = basis.iter().fold(T::zero(), |m, x| m.max(x.frobenius_norm()));
        let mut pair = Self {
            ambient_n,
            basis,
            sigma,
            theta_inv,
            algebra: SymmetricLieAlgebra::zero(),
            coord_map,
            basis_scale,
            label,
            tol: *tol,
        };
        pair.algebra = pair.structure()?;
        pair.check_sigma_derivative()?;
        Ok(pair)
    }

    /// Re-expresses the basis in theta-eigenvectors, `g+` first.
    fn adapt(
        n: usize,
        basis: Vec<Matrix<T>>,
        sigma: &SigmaRule<T>,
        ti: Option<&Matrix<T>>,
        tol: &Tolerance<T>,
    ) -> Result<Vec<Matrix<T>>, PairError> {
        let d = basis.len();
        if d == 0 {
            return Ok(basis);
        }
        let b = stack(n, &basis);
        let pinv = pseudo_inverse(&b, tol);
        let images: Vec<Vec<T>> = basis
            .iter()
            .map(|x| pinv.matvec(&sigma.on_algebra(x, ti).to_vec()))
            .collect();
        let th = Matrix::from_columns(d, &images);
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let diagonal = (0..d).all(|j| (0..d).all(|i| i == j || th[(i, j)].abs() <= tol.threshold(T::one())));
        if diagonal {
            for j in 0..d {
                if (th[(j, j)] - T::one()).abs() <= tol.threshold(T::one()) {
                    plus.push(basis[j].clone());
                } else if (th[(j, j)] + T::one()).abs() <= tol.threshold(T::one()) {
                    minus.push(basis[j].clone());
                } else {
                    return Err(PairError::NotInvolution);
                }
            }
        } else {
            let id = Matrix::identity(d);
            let combine = |c: &[T]| {
                c.iter()
                    .zip(&basis)
                    .fold(Matrix::zeros(n, n), |acc, (&ci, bi)| &acc + &bi.scale(ci))
            };
            plus = crate::numkernel::nullspace(&(&th - &id), tol).iter().map(|c| combine(c)).collect();
            minus = crate::numkernel::nullspace(&(&th + &id), tol).iter().map(|c| combine(c)).collect();
        }
        if plus.len() + minus.len() != d {
            return Err(PairError::NotInvolution);
        }
        plus.extend(minus);
        Ok(plus)
    }

    fn structure(&self) -> Result<SymmetricLieAlgebra<T>, PairError> {
        let d = self.basis.len();
        let mut tensor = Vec::with_capacity(d * d * d);
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let c = self.basis[i].commutator(&self.basis[j]);
                let coords = self.coord_map.matvec(&c.to_vec());
                worst = worst.max(self.to_matrix(&coords).dist(&c));
                tensor.extend(coords);
            }
        }
        let scale = self.basis_scale * self.basis_scale;
        if !self.tol.is_zero(worst, scale) {
            return Err(PairError::NotClosed(worst.as_f64()));
        }
        let theta_diag: Vec<T> = (0..d)
            .map(|j| {
                let img = self.sigma.on_algebra(&self.basis[j], self.theta_inv.as_ref());
                if img.dist(&self.basis[j]) <= self.tol.threshold(self.basis_scale) {
                    T::one()
                } else {
                    -T::one()
                }
            })
            .collect();
        Ok(SymmetricLieAlgebra::new(
            d,
            tensor,
            Matrix::diag(&theta_diag),
            self.label.clone(),
            &self.tol,
        )?)
    }

    /// `sigma(exp(tx))` against `exp(t theta(x))` by a central difference.
    fn check_sigma_derivative(&self) -> Result<(), PairError> {
        let t = T::c(1e-3);
        let loose = self.tol.loose();
        for x in &self.basis {
            let plus = self.group_sigma(&mat_exp(&x.scale(t))?)?;
            let minus = self.group_sigma(&mat_exp(&x.scale(-t))?)?;
            let fd = (&plus - &minus).scale(T::one() / (T::c(2.0) * t));
            let want = self.sigma.on_algebra(x, self.theta_inv.as_ref());
            let r = fd.dist(&want);
            if !loose.is_zero(r, x.frobenius_norm()) {
                return Err(PairError::SigmaMismatch(r.as_f64()));
            }
        }
        Ok(())
    }

    pub fn from_descriptor(desc: &PairDescriptor<T>, tol: &Tolerance<T>) -> Result<Self, PairError> {
        Self::new(desc.ambient_n, desc.algebra_basis.clone(), desc.sigma.clone(), desc.label.clone(), tol)
    }

    pub fn to_descriptor(&self) -> PairDescriptor<T> {
        PairDescriptor {
            ambient_n: self.ambient_n,
            algebra_basis: self.basis.clone(),
            sigma: self.sigma.clone(),
            label: self.label.clone(),
        }
    }

    #[inline]
    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn basis(&self) -> &[Matrix<T>] {
        &self.basis
    }

    pub fn sigma(&self) -> &SigmaRule<T> {
        &self.sigma
    }

    pub fn algebra(&self) -> &SymmetricLieAlgebra<T> {
        &self.algebra
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tolerance(&self) -> &Tolerance<T> {
        &self.tol
    }

    /// `dim g`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim g-`.
    pub fn minus_dim(&self) -> usize {
        self.algebra.minus().dim()
    }

    /// `sum_i c_i b_i`.
    pub fn to_matrix(&self, coords: &[T]) -> Matrix<T> {
        assert_eq!(coords.len(), self.basis.len(), "coordinate length");
        let n = self.ambient_n;
        coords
            .iter()
            .zip(&self.basis)
            .filter(|(c, _)| **c != T::zero())
            .fold(Matrix::zeros(n, n), |acc, (&c, b)| &acc + &b.scale(c))
    }

    /// Coordinates of an algebra element.
    pub fn coords(&self, x: &Matrix<T>) -> Result<Vec<T>, PairError> {
        if x.rows() != self.ambient_n || x.cols() != self.ambient_n {
            return Err(PairError::Invalid("matrix has the wrong size".into()));
        }
        let c = self.coord_map.matvec(&x.to_vec());
        let r = self.to_matrix(&c).dist(x);
        if !self.tol.is_zero(r, x.frobenius_norm()) {
            return Err(PairError::NotInAlgebra(r.as_f64()));
        }
        Ok(c)
    }

    /// Matrix of a `g-` coordinate vector.
    pub fn minus_matrix(&self, v: &[T]) -> Matrix<T> {
        self.to_matrix(&self.algebra.embed_minus(v))
    }

    /// `g-` coordinates of a matrix in `g-`.
    pub fn minus_coords_of(&self, x: &Matrix<T>) -> Result<Vec<T>, PairError> {
        let c = self.coords(x)?;
        let v = self.algebra.minus_coords(&c);
        let back = self.algebra.embed_minus(&v);
        let r = crate::numkernel::norm(&crate::numkernel::sub(&c, &back));
        if !self.tol.is_zero(r, crate::numkernel::norm(&c)) {
            return Err(PairError::NotInAlgebra(r.as_f64()));
        }
        Ok(v)
    }

    pub fn group_sigma(&self, g: &Matrix<T>) -> Result<Matrix<T>, PairError> {
        if g.rows() != self.ambient_n || !g.is_square() {
            return Err(PairError::Invalid("matrix has the wrong size".into()));
        }
        self.sigma.on_group(g, self.theta_inv.as_ref())
    }

    pub fn algebra_theta(&self, x: &Matrix<T>) -> Matrix<T> {
        self.sigma.on_algebra(x, self.theta_inv.as_ref())
    }

    /// `sigma(g) = g` up to tolerance; singular input is never fixed.
    pub fn in_fixed_group(&self, g: &Matrix<T>) -> bool {
        match self.group_sigma(g) {
            Ok(s) => self.tol.is_zero(s.dist(g), g.frobenius_norm()),
            Err(_) => false,
        }
    }

    fn require_in_algebra(&self, x: &Matrix<T>) -> Result<(), PairError> {
        self.coords(x).map(|_| ())
    }

    /// `(exp(x/k) exp(y/k))^k`.
    pub fn trotter_group_sum(&self, x: &Matrix<T>, y: &Matrix<T>, k: u64) -> Result<Matrix<T>, PairError> {
        self.require_in_algebra(x)?;
        self.require_in_algebra(y)?;
        let k = k.max(1);
        let s = T::one() / T::c(k as f64);
        let step = mat_exp(&x.scale(s))?.matmul(&mat_exp(&y.scale(s))?);
        Ok(step.powi(k))
    }

    /// `(exp(x/k) exp(y/k) exp(-x/k) exp(-y/k))^(k^2)`.
    pub fn trotter_group_commutator(&self, x: &Matrix<T>, y: &Matrix<T>, k: u64) -> Result<Matrix<T>, PairError> {
        self.require_in_algebra(x)?;
        self.require_in_algebra(y)?;
        let k = k.max(1);
        let s = T::one() / T::c(k as f64);
        let ex = mat_exp(&x.scale(s))?;
        let ey = mat_exp(&y.scale(s))?;
        let exi = mat_exp(&x.scale(-s))?;
        let eyi = mat_exp(&y.scale(-s))?;
        Ok(ex.matmul(&ey).matmul(&exi).matmul(&eyi).powi(k * k))
    }

    /// Product in `G x L` coordinates:
    /// `(g1, l1)(g2, l2) = (g1 g2, g2^{-1} l1 g2 l2)`.
    pub fn relation_group_product(
        &self,
        l_algebra: &LinearSubspace<T>,
        (g1, l1): (&Matrix<T>, &Matrix<T>),
        (g2, l2): (&Matrix<T>, &Matrix<T>),
    ) -> Result<(Matrix<T>, Matrix<T>), PairError> {
        if !is_lie_ideal(&self.algebra, l_algebra, &self.tol) {
            return Err(PairError::NotIdeal);
        }
        let g2i = inverse(g2).map_err(|_| PairError::Singular)?;
        let g = g1.matmul(g2);
        let l = g2i.matmul(l1).matmul(g2).matmul(l2);
        let log = mat_log(&l)?;
        let c = self.coords(&log)?;
        let r = l_algebra.residual(&c);
        if !self.tol.loose().is_zero(r, crate::numkernel::norm(&c)) {
            return Err(PairError::LeftIdeal(r.as_f64()));
        }
        Ok((g, l))
    }

    /// Scale of the basis, for tolerance decisions on group elements.
    pub fn basis_scale(&self) -> T {
        self.basis_scale
    }
}
