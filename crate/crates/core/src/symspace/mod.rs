//! The symmetric space `M = G/K` of a matrix symmetric pair.
//!
//! A point `gK` is stored with a representative `g` and its Cartan image
//! `g sigma(g)^{-1}`, which determines the coset because `K = G^sigma`. The
//! product becomes `x . y = X Y^{-1} X` on Cartan images and `Exp(v)` has
//! Cartan image `exp(2v)`.

use std::sync::Arc;

use thiserror::Error;

use crate::lts::{LieTripleSystem, LtsError};
use crate::numkernel::{inverse, mat_exp, mat_log, scaled, KernelError, Matrix, Tolerance};
use crate::scalar::Real;
use crate::sympair::{MatrixSymmetricPair, PairError, PairMorphism};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymError {
    #[error("points belong to different symmetric pairs")]
    PairMismatch,
    #[error("vector has {got} coordinates, g- has dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("point lies outside the normal chart: {0}")]
    OutOfChart(String),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Point of `G/K`.
#[derive(Debug, Clone)]
pub struct SymPoint<T: Real> {
    pair: Arc<MatrixSymmetricPair<T>>,
    rep: Matrix<T>,
    cartan: Matrix<T>,
}

impl<T: Real> SymPoint<T> {
    /// Point `gK` for an invertible `g`.
    pub fn from_rep(pair: Arc<MatrixSymmetricPair<T>>, rep: Matrix<T>) -> Result<Self, SymError> {
        let s = pair.group_sigma(&rep)?;
        let cartan = rep.matmul(&inverse(&s).map_err(|_| PairError::Singular)?);
        Ok(Self { pair, rep, cartan })
    }

    pub fn pair(&self) -> &Arc<MatrixSymmetricPair<T>> {
        &self.pair
    }

    pub fn rep(&self) -> &Matrix<T> {
        &self.rep
    }

    pub fn cartan(&self) -> &Matrix<T> {
        &self.cartan
    }

    /// Frobenius distance of Cartan images.
    pub fn distance(&self, other: &Self) -> T {
        self.cartan.dist(&other.cartan)
    }

    pub fn same_point(&self, other: &Self, tol: &Tolerance<T>) -> bool {
        tol.is_zero(self.distance(other), self.cartan.frobenius_norm())
    }

    /// `cartan = rep sigma(rep)^{-1}` and `sigma(cartan) = cartan^{-1}`.
    pub fn invariant_residual(&self) -> Result<T, SymError> {
        let s = self.pair.group_sigma(&self.rep)?;
        let r1 = self.cartan.matmul(&s).dist(&self.rep);
        let r2 = self
            .pair
            .group_sigma(&self.cartan)?
            .matmul(&self.cartan)
            .dist(&Matrix::identity(self.pair.ambient_n()));
        Ok(r1.max(r2))
    }
}

/// `M = G/K` for a pair, with the base point `K`.
#[derive(Debug, Clone)]
pub struct SymmetricSpace<T: Real> {
    pair: Arc<MatrixSymmetricPair<T>>,
}

impl<T: Real> SymmetricSpace<T> {
    pub fn new(pair: Arc<MatrixSymmetricPair<T>>) -> Self {
        Self { pair }
    }

    pub fn pair(&self) -> &Arc<MatrixSymmetricPair<T>> {
        &self.pair
    }

    pub fn tolerance(&self) -> &Tolerance<T> {
        self.pair.tolerance()
    }

    /// `dim M = dim g-`.
    pub fn dim(&self) -> usize {
        self.pair.minus_dim()
    }

    fn owns(&self, x: &SymPoint<T>) -> Result<(), SymError> {
        if Arc::ptr_eq(&self.pair, &x.pair) || *self.pair == *x.pair {
            Ok(())
        } else {
            Err(SymError::PairMismatch)
        }
    }

    fn check_dim(&self, v: &[T]) -> Result<(), SymError> {
        if v.len() != self.dim() {
            return Err(SymError::Dimension {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn base_point(&self) -> SymPoint<T> {
        let id = Matrix::identity(self.pair.ambient_n());
        SymPoint {
            pair: self.pair.clone(),
            rep: id.clone(),
            cartan: id,
        }
    }

    pub fn point(&self, rep: Matrix<T>) -> Result<SymPoint<T>, SymError> {
        SymPoint::from_rep(self.pair.clone(), rep)
    }

    /// `x . y`: Cartan image `X Y^{-1} X`, representative `X sigma(y.rep)`.
    pub fn mu(&self, x: &SymPoint<T>, y: &SymPoint<T>) -> Result<SymPoint<T>, SymError> {
        self.owns(x)?;
        self.owns(y)?;
        let yi = inverse(&y.cartan).map_err(|_| PairError::Singular)?;
        let cartan = x.cartan.matmul(&yi).matmul(&x.cartan);
        let rep = x.cartan.matmul(&self.pair.group_sigma(&y.rep)?);
        Ok(SymPoint {
            pair: self.pair.clone(),
            rep,
            cartan,
        })
    }

    /// `Exp(v) = q(exp v)`; Cartan image `exp(2v)`.
    pub fn exp_point(&self, v: &[T]) -> Result<SymPoint<T>, SymError> {
        self.check_dim(v)?;
        let x = self.pair.minus_matrix(v);
        Ok(SymPoint {
            pair: self.pair.clone(),
            rep: mat_exp(&x)?,
            cartan: mat_exp(&x.scale(T::c(2.0)))?,
        })
    }

    /// Normal-chart coordinates: `g-` part of `log(cartan) / 2`.
    pub fn log_point(&self, x: &SymPoint<T>) -> Result<Vec<T>, SymError> {
        self.owns(x)?;
        let l = mat_log(&x.cartan)
            .map_err(|e| SymError::OutOfChart(format!("principal logarithm failed: {e}")))?
            .scale(T::c(0.5));
        self.pair.minus_coords_of(&l).map_err(|e| match e {
            PairError::NotInAlgebra(r) => SymError::OutOfChart(format!("log leaves g- (residual {r:e})")),
            other => other.into(),
        })
    }

    /// `alpha_v(t) = Exp(tv)`.
    pub fn one_param(&self, v: &[T], t: T) -> Result<SymPoint<T>, SymError> {
        self.exp_point(&scaled(t, v))
    }

    /// `tau_{alpha,s} = mu_{alpha(s/2)} mu_{alpha(0)}` applied to `x`.
    pub fn translation(&self, v: &[T], s: T, x: &SymPoint<T>) -> Result<SymPoint<T>, SymError> {
        let half = self.one_param(v, s * T::c(0.5))?;
        self.mu(&half, &self.mu(&self.base_point(), x)?)
    }

    /// `g . hK = ghK`.
    pub fn tau_action(&self, g: &Matrix<T>, x: &SymPoint<T>) -> Result<SymPoint<T>, SymError> {
        self.owns(x)?;
        let s = self.pair.group_sigma(g)?;
        let si = inverse(&s).map_err(|_| PairError::Singular)?;
        Ok(SymPoint {
            pair: self.pair.clone(),
            rep: g.matmul(&x.rep),
            cartan: g.matmul(&x.cartan).matmul(&si),
        })
    }

    /// `mu_a mu_b = tau_g` with `g = A B^{-1}` (Cartan images).
    fn displacement(&self, a: &SymPoint<T>, b: &SymPoint<T>) -> Result<Matrix<T>, SymError> {
        Ok(a.cartan.matmul(&inverse(&b.cartan).map_err(|_| PairError::Singular)?))
    }

    /// `(mu_{Exp(x/2k)} mu_{Exp(-y/2k)})^k (b)`, evaluated as `tau_{g^k}(b)`
    /// with `g = exp(x/k) exp(y/k)`.
    pub fn trotter_sum_sym(&self, x: &[T], y: &[T], k: u64) -> Result<SymPoint<T>, SymError> {
        let k = k.max(1);
        let s = T::one() / (T::c(2.0) * T::c(k as f64));
        let g = self.displacement(&self.exp_point(&scaled(s, x))?, &self.exp_point(&scaled(-s, y))?)?;
        self.point(g.powi(k))
    }

    /// The same orbit computed by applying all `2k` symmetries one by one.
    pub fn trotter_sum_naive(&self, x: &[T], y: &[T], k: u64) -> Result<SymPoint<T>, SymError> {
        let k = k.max(1);
        let s = T::one() / (T::c(2.0) * T::c(k as f64));
        let a = self.exp_point(&scaled(s, x))?;
        let b = self.exp_point(&scaled(-s, y))?;
        let mut p = self.base_point();
        for _ in 0..k {
            p = self.mu(&a, &self.mu(&b, &p)?)?;
        }
        Ok(p)
    }

    /// Displacements `G` and `H` of the inner factors `g_(k,l)`, `h_(k,l)`.
    fn bracket_factors(&self, x: &[T], y: &[T], k: u64, l: u64) -> Result<(Matrix<T>, Matrix<T>), SymError> {
        let s = T::one() / (T::c(2.0) * T::c(l as f64) * T::c(k as f64).sqrt());
        let e = |v: &[T], c: T| self.exp_point(&scaled(c, v));
        let (xp, xm, yp, ym) = (e(x, s)?, e(x, -s)?, e(y, s)?, e(y, -s)?);
        let g = self
            .displacement(&xp, &ym)?
            .matmul(&self.displacement(&xm, &yp)?)
            .powi(l * l);
        let h = self
            .displacement(&xp, &yp)?
            .matmul(&self.displacement(&xm, &ym)?)
            .powi(l * l);
        Ok((g, h))
    }

    /// `(g_(k,l) mu_{Exp(z/2k)} h_(k,l) mu_{Exp(z/2k)})^(k^2) (b)`.
    ///
    /// With `Z = exp(z/k)` the Cartan image of `Exp(z/2k)`, one step is the
    /// displacement `G Z sigma(H) Z^{-1}`.
    pub fn trotter_bracket_sym(&self, x: &[T], y: &[T], z: &[T], k: u64, l: u64) -> Result<SymPoint<T>, SymError> {
        let (k, l) = (k.max(1), l.max(1));
        let (g, h) = self.bracket_factors(x, y, k, l)?;
        let zc = self.exp_point(&scaled(T::one() / (T::c(2.0) * T::c(k as f64)), z))?.cartan;
        let zi = inverse(&zc).map_err(|_| PairError::Singular)?;
        let w = g.matmul(&zc).matmul(&self.pair.group_sigma(&h)?).matmul(&zi);
        self.point(w.powi(k * k))
    }

    /// Direct evaluation of the same symmetry word, for small `k` and `l`.
    pub fn trotter_bracket_naive(&self, x: &[T], y: &[T], z: &[T], k: u64, l: u64) -> Result<SymPoint<T>, SymError> {
        let (k, l) = (k.max(1), l.max(1));
        let s = T::one() / (T::c(2.0) * T::c(l as f64) * T::c(k as f64).sqrt());
        let e = |v: &[T], c: T| self.exp_point(&scaled(c, v));
        let (xp, xm, yp, ym) = (e(x, s)?, e(x, -s)?, e(y, s)?, e(y, -s)?);
        let zp = e(z, T::one() / (T::c(2.0) * T::c(k as f64)))?;
        let apply = |word: &[&SymPoint<T>], p: SymPoint<T>| -> Result<SymPoint<T>, SymError> {
            word.iter().rev().try_fold(p, |acc, a| self.mu(a, &acc))
        };
        let g_word = [&xp, &ym, &xm, &yp];
        let h_word = [&xp, &yp, &xm, &ym];
        let mut p = self.base_point();
        for _ in 0..k * k {
            p = self.mu(&zp, &p)?;
            for _ in 0..l * l {
                p = apply(&h_word, p)?;
            }
            p = self.mu(&zp, &p)?;
            for _ in 0..l * l {
                p = apply(&g_word, p)?;
            }
        }
        Ok(p)
    }

    /// Cartan distance between `q(exp x_n exp y_n ... exp x_1 exp y_1)` and
    /// `(mu_{Exp(x_n/2)} mu_{Exp(-y_n/2)} ... mu_{Exp(x_1/2)} mu_{Exp(-y_1/2)})(b)`.
    pub fn chain_identity_check(&self, xs: &[Vec<T>], ys: &[Vec<T>]) -> Result<T, SymError> {
        if xs.len() != ys.len() {
            return Err(SymError::Dimension {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        let n = self.pair.ambient_n();
        let mut g = Matrix::identity(n);
        for (x, y) in xs.iter().zip(ys).rev() {
            self.check_dim(x)?;
            self.check_dim(y)?;
            g = g
                .matmul(&mat_exp(&self.pair.minus_matrix(x))?)
                .matmul(&mat_exp(&self.pair.minus_matrix(y))?);
        }
        let left = self.point(g)?;
        let half = T::c(0.5);
        let mut right = self.base_point();
        for (x, y) in xs.iter().zip(ys) {
            right = self.mu(&self.exp_point(&scaled(-half, y))?, &right)?;
            right = self.mu(&self.exp_point(&scaled(half, x))?, &right)?;
        }
        Ok(left.distance(&right))
    }

    /// `[x,y,z] = [[x,y],z]` on `g-`.
    pub fn lts_of_pair(&self) -> Result<LieTripleSystem<T>, SymError> {
        Ok(self.pair.algebra().lts(self.pair.tolerance())?)
    }
}

/// One-parameter subspace `t -> tau_{base.rep}(Exp(tv))` through `base`.
#[derive(Debug, Clone)]
pub struct OneParamSubspace<T: Real> {
    pub base: SymPoint<T>,
    pub direction: Vec<T>,
}

impl<T: Real> OneParamSubspace<T> {
    pub fn at(&self, space: &SymmetricSpace<T>, t: T) -> Result<SymPoint<T>, SymError> {
        let p = space.one_param(&self.direction, t)?;
        space.tau_action(&self.base.rep, &p)
    }
}

/// Point map `Sym(f)` induced by a pair morphism.
#[derive(Debug, Clone)]
pub struct SymMorphism<T: Real> {
    morphism: PairMorphism<T>,
}

impl<T: Real> SymMorphism<T> {
    pub fn new(morphism: PairMorphism<T>) -> Self {
        Self { morphism }
    }

    pub fn morphism(&self) -> &PairMorphism<T> {
        &self.morphism
    }

    pub fn source(&self) -> SymmetricSpace<T> {
        SymmetricSpace::new(self.morphism.source().clone())
    }

    pub fn target(&self) -> SymmetricSpace<T> {
        SymmetricSpace::new(self.morphism.target().clone())
    }

    /// `g-` part of the algebra map (`dim M2 x dim M1`).
    pub fn tangent_map(&self) -> Matrix<T> {
        self.morphism.minus_map()
    }

    pub fn apply(&self, x: &SymPoint<T>) -> Result<SymPoint<T>, SymError> {
        let img = self.morphism.apply_group(x.rep())?;
        SymPoint::from_rep(self.morphism.target().clone(), img)
    }
}

/// `Sym(f)`.
pub fn sym_morphism<T: Real>(f: PairMorphism<T>) -> SymMorphism<T> {
    SymMorphism::new(f)
}

#[cfg(test)]
mod tests;
