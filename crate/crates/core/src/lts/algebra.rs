use serde::{Deserialize, Serialize};

use super::{AxiomResidual, LieTripleSystem, LinearSubspace, LtsError};
use crate::numkernel::{axpy, norm, nullspace, sub, unit_vector, Matrix, Tolerance};
use crate::scalar::Real;

/// Lie algebra `b[i][j][l]` (`[e_i, e_j] = sum_l b[i][j][l] e_l`) with an
/// involutive automorphism `theta` and its eigenspaces `g+`, `g-`.
///
/// `g-` coordinates elsewhere in the crate are coefficients in the stored
/// (orthonormal) basis of `minus`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricLieAlgebra<T: Real> {
    dim: usize,
    tensor: Vec<T>,
    theta: Matrix<T>,
    plus: LinearSubspace<T>,
    minus: LinearSubspace<T>,
    label: String,
}

/// Residuals of the defining identities of a symmetric Lie algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub antisymmetry: AxiomResidual,
    pub jacobi: AxiomResidual,
    pub involution: AxiomResidual,
    pub automorphism: AxiomResidual,
    pub eigen_split: AxiomResidual,
}

impl AlgebraReport {
    pub fn entries(&self) -> [&AxiomResidual; 5] {
        [
            &self.antisymmetry,
            &self.jacobi,
            &self.involution,
            &self.automorphism,
            &self.eigen_split,
        ]
    }

    pub fn passed(&self) -> bool {
        self.entries().iter().all(|r| r.pass)
    }

    fn failures(&self) -> String {
        self.entries()
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("{} (residual {:e})", r.name, r.max_residual))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn eigenspace<T: Real>(theta: &Matrix<T>, sign: T, tol: &Tolerance<T>) -> LinearSubspace<T> {
    let d = theta.rows();
    let off_diag = (0..d)
        .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
        .fold(T::zero(), |m, (i, j)| m.max(theta[(i, j)].abs()));
    if off_diag == T::zero() {
        // keep coordinate axes when theta is already diagonal
        let idx: Vec<usize> = (0..d)
            .filter(|&i| (theta[(i, i)] - sign).abs() <= tol.threshold(T::one()))
            .collect();
        return LinearSubspace::coordinate(d, &idx);
    }
    let shifted = theta - &Matrix::identity(d).scale(sign);
    LinearSubspace::span(d, &nullspace(&shifted, tol), tol)
}

impl<T: Real> SymmetricLieAlgebra<T> {
    /// Validates the tensor and `theta`; fails with the list of broken identities.
    pub fn new(
        dim: usize,
        tensor: Vec<T>,
        theta: Matrix<T>,
        label: impl Into<String>,
        tol: &Tolerance<T>,
    ) -> Result<Self, LtsError> {
        let g = Self::unchecked(dim, tensor, theta, label, tol)?;
        let rep = g.check(tol);
        if !rep.passed() {
            return Err(LtsError::Verification(format!(
                "symmetric Lie algebra {}: {}",
                g.label,
                rep.failures()
            )));
        }
        Ok(g)
    }

    /// Shape checks only.
    pub fn unchecked(
        dim: usize,
        tensor: Vec<T>,
        theta: Matrix<T>,
        label: impl Into<String>,
        tol: &Tolerance<T>,
    ) -> Result<Self, LtsError> {
        if tensor.len() != dim.pow(3) {
            return Err(LtsError::DimensionMismatch {
                expected: dim.pow(3),
                got: tensor.len(),
            });
        }
        if theta.rows() != dim || theta.cols() != dim {
            return Err(LtsError::DimensionMismatch {
                expected: dim,
                got: theta.rows(),
            });
        }
        let plus = eigenspace(&theta, T::one(), tol);
        let minus = eigenspace(&theta, -T::one(), tol);
        Ok(Self {
            dim,
            tensor,
            theta,
            plus,
            minus,
            label: label.into(),
        })
    }

    /// The zero algebra.
    pub fn zero() -> Self {
        Self {
            dim: 0,
            tensor: Vec::new(),
            theta: Matrix::zeros(0, 0),
            plus: LinearSubspace::zero(0),
            minus: LinearSubspace::zero(0),
            label: "0".into(),
        }
    }

    /// `g1 + g2` with coordinates of `g1` first.
    pub fn direct_sum(a: &Self, b: &Self, tol: &Tolerance<T>) -> Result<Self, LtsError> {
        let d = a.dim + b.dim;
        let mut tensor = vec![T::zero(); d * d * d];
        for (src, off) in [(a, 0), (b, a.dim)] {
            let s = src.dim;
            for i in 0..s {
                for j in 0..s {
                    for l in 0..s {
                        tensor[((off + i) * d + off + j) * d + off + l] = src.tensor[(i * s + j) * s + l];
                    }
                }
            }
        }
        let theta = Matrix::block_diag(&a.theta, &b.theta);
        Self::new(d, tensor, theta, format!("{}+{}", a.label, b.label), tol)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tensor(&self) -> &[T] {
        &self.tensor
    }

    pub fn theta(&self) -> &Matrix<T> {
        &self.theta
    }

    pub fn plus(&self) -> &LinearSubspace<T> {
        &self.plus
    }

    pub fn minus(&self) -> &LinearSubspace<T> {
        &self.minus
    }

    pub fn scale(&self) -> T {
        self.tensor.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    #[inline]
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[T] {
        let s = (i * self.dim + j) * self.dim;
        &self.tensor[s..s + self.dim]
    }

    #[allow(clippy::needless_range_loop)]
    pub fn bracket(&self, x: &[T], y: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![T::zero(); self.dim];
        for i in 0..self.dim {
            if x[i] == T::zero() {
                continue;
            }
            for j in 0..self.dim {
                let c = x[i] * y[j];
                if c != T::zero() {
                    axpy(c, self.basis_bracket(i, j), &mut out);
                }
            }
        }
        out
    }

    /// `ad x` as a `dim x dim` matrix.
    pub fn ad(&self, x: &[T]) -> Matrix<T> {
        let cols: Vec<Vec<T>> = (0..self.dim)
            .map(|j| self.bracket(x, &unit_vector(self.dim, j)))
            .collect();
        Matrix::from_columns(self.dim, &cols)
    }

    pub fn apply_theta(&self, x: &[T]) -> Vec<T> {
        self.theta.matvec(x)
    }

    /// `g-` coordinates to `g` coordinates.
    pub fn embed_minus(&self, v: &[T]) -> Vec<T> {
        self.minus.combine(v)
    }

    pub fn minus_coords(&self, x: &[T]) -> Vec<T> {
        self.minus.coordinates(x)
    }

    /// Subspace of `g` corresponding to a subspace of `g-` coordinates.
    pub fn minus_subspace_in_g(&self, n: &LinearSubspace<T>, tol: &Tolerance<T>) -> LinearSubspace<T> {
        assert_eq!(n.ambient_dim(), self.minus.dim());
        let vs: Vec<Vec<T>> = n.basis().iter().map(|v| self.embed_minus(v)).collect();
        LinearSubspace::span(self.dim, &vs, tol)
    }

    pub fn check(&self, tol: &Tolerance<T>) -> AlgebraReport {
        let d = self.dim;
        let s = self.scale();
        let vmax = |v: &[T]| v.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
        let e: Vec<Vec<T>> = (0..d).map(|i| unit_vector(d, i)).collect();

        let mut anti = T::zero();
        let mut jac = T::zero();
        let mut aut = T::zero();
        for i in 0..d {
            for j in 0..d {
                anti = anti.max(vmax(&crate::numkernel::add(self.basis_bracket(i, j), self.basis_bracket(j, i))));
                let lhs = self.apply_theta(self.basis_bracket(i, j));
                let rhs = self.bracket(&self.theta.col(i), &self.theta.col(j));
                aut = aut.max(vmax(&sub(&lhs, &rhs)));
                for k in 0..d {
                    let mut c = self.bracket(&e[i], self.basis_bracket(j, k));
                    axpy(T::one(), &self.bracket(&e[j], self.basis_bracket(k, i)), &mut c);
                    axpy(T::one(), &self.bracket(&e[k], self.basis_bracket(i, j)), &mut c);
                    jac = jac.max(vmax(&c));
                }
            }
        }
        let inv = self.theta.matmul(&self.theta).dist(&Matrix::identity(d));
        let split = if self.plus.dim() + self.minus.dim() == d {
            T::zero()
        } else {
            T::one()
        };
        let th = |scale: T| tol.threshold(scale).as_f64();
        AlgebraReport {
            antisymmetry: AxiomResidual::new("antisymmetry", anti.as_f64(), th(s)),
            jacobi: AxiomResidual::new("jacobi", jac.as_f64(), th(s * s)),
            involution: AxiomResidual::new("theta_involution", inv.as_f64(), th(T::one())),
            automorphism: AxiomResidual::new("theta_automorphism", aut.as_f64(), th(s)),
            eigen_split: AxiomResidual::new("eigen_split", split.as_f64(), th(T::zero())),
        }
    }

    /// Triple system on `g-` with `[x,y,z] = [[x,y],z]`, in `g-` coordinates.
    pub fn lts(&self, tol: &Tolerance<T>) -> Result<LieTripleSystem<T>, LtsError> {
        let k = self.minus.dim();
        let worst = std::cell::Cell::new(T::zero());
        let lts = LieTripleSystem::from_fn(k, self.label.clone(), |a, b, c| {
            let (x, y, z) = (self.embed_minus(a), self.embed_minus(b), self.embed_minus(c));
            let w = self.bracket(&self.bracket(&x, &y), &z);
            worst.set(worst.get().max(self.minus.residual(&w)));
            self.minus_coords(&w)
        });
        let worst = worst.get();
        let scale = self.scale() * self.scale();
        if !tol.is_zero(worst, scale) {
            return Err(LtsError::Verification(format!(
                "double bracket leaves g- (residual {:e})",
                worst.as_f64()
            )));
        }
        Ok(lts)
    }

    /// Symmetric bilinear form `tr(ad x ad y)` on the basis.
    pub fn killing_form(&self) -> Matrix<T> {
        let d = self.dim;
        let ads: Vec<Matrix<T>> = (0..d).map(|i| self.ad(&unit_vector(d, i))).collect();
        let mut k = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                k[(i, j)] = ads[i].matmul(&ads[j]).trace();
            }
        }
        k
    }

    /// Is `[x, y] ∈ sub` for the given vectors, against the algebra's scale?
    pub(crate) fn lands_in(&self, sub_: &LinearSubspace<T>, w: &[T], tol: &Tolerance<T>) -> bool {
        tol.is_zero(sub_.residual(w), norm(w).max(self.scale()))
    }
}
