use std::sync::Arc;

use super::{MatrixSymmetricPair, PairError};
use crate::numkernel::{inverse, mat_exp, Matrix};
use crate::scalar::Real;

/// Group-level rule of a pair morphism, together with its differential.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupMap<T: Real> {
    Identity,
    /// `g -> diag(g, g)`.
    Diagonal,
    /// Diagonal block of size `size` starting at `offset`.
    Project { offset: usize, size: usize },
    /// `g -> diag(I, g, I)` inside `total x total`.
    Embed { offset: usize, total: usize },
    /// Constant map to the 1x1 identity.
    Trivial,
    /// `g -> Ad(g)` on the quotient of the source algebra by an ideal:
    /// column `j` is `proj * coords(g lift_j g^{-1})`.
    Adjoint { lifts: Vec<Matrix<T>>, proj: Matrix<T> },
}

impl<T: Real> GroupMap<T> {
    pub fn apply(&self, source: &MatrixSymmetricPair<T>, g: &Matrix<T>) -> Result<Matrix<T>, PairError> {
        Ok(match self {
            GroupMap::Identity => g.clone(),
            GroupMap::Diagonal => Matrix::block_diag(g, g),
            GroupMap::Project { offset, size } => g.block(*offset, *offset, *size, *size),
            GroupMap::Embed { offset, total } => {
                let mut m = Matrix::identity(*total);
                m.set_block(*offset, *offset, g);
                m
            }
            GroupMap::Trivial => Matrix::identity(1),
            GroupMap::Adjoint { lifts, proj } => {
                let gi = inverse(g).map_err(|_| PairError::Singular)?;
                let cols: Vec<Vec<T>> = lifts
                    .iter()
                    .map(|x| {
                        let c = source.coords(&g.matmul(x).matmul(&gi))?;
                        Ok(proj.matvec(&c))
                    })
                    .collect::<Result<_, PairError>>()?;
                Matrix::from_columns(proj.rows(), &cols)
            }
        })
    }

    /// Differential at the identity, on matrices.
    pub fn differential(&self, source: &MatrixSymmetricPair<T>, x: &Matrix<T>) -> Result<Matrix<T>, PairError> {
        Ok(match self {
            GroupMap::Identity => x.clone(),
            GroupMap::Diagonal => Matrix::block_diag(x, x),
            GroupMap::Project { offset, size } => x.block(*offset, *offset, *size, *size),
            GroupMap::Embed { offset, total } => {
                let mut m = Matrix::zeros(*total, *total);
                m.set_block(*offset, *offset, x);
                m
            }
            GroupMap::Trivial => Matrix::zeros(1, 1),
            GroupMap::Adjoint { lifts, proj } => {
                let cols: Vec<Vec<T>> = lifts
                    .iter()
                    .map(|y| Ok(proj.matvec(&source.coords(&x.commutator(y))?)))
                    .collect::<Result<_, PairError>>()?;
                Matrix::from_columns(proj.rows(), &cols)
            }
        })
    }
}

/// Morphism of symmetric pairs: a group rule plus its algebra map on full
/// `g` coordinates (`dim target x dim source`).
#[derive(Debug, Clone)]
pub struct PairMorphism<T: Real> {
    source: Arc<MatrixSymmetricPair<T>>,
    target: Arc<MatrixSymmetricPair<T>>,
    algebra_map: Matrix<T>,
    group_map: GroupMap<T>,
}

impl<T: Real> PairMorphism<T> {
    /// Derives the algebra map from the differential and verifies bracket and
    /// involution compatibility and `f(exp x) = exp(A x)` on basis rays.
    pub fn new(
        source: Arc<MatrixSymmetricPair<T>>,
        target: Arc<MatrixSymmetricPair<T>>,
        group_map: GroupMap<T>,
    ) -> Result<Self, PairError> {
        let bad = |m: String| PairError::Morphism(m);
        let cols: Vec<Vec<T>> = source
            .basis()
            .iter()
            .map(|b| {
                let img = group_map.differential(&source, b)?;
                if img.rows() != target.ambient_n() || img.cols() != target.ambient_n() {
                    return Err(bad("image has the wrong size".into()));
                }
                target.coords(&img)
            })
            .collect::<Result<_, _>>()?;
        let algebra_map = if cols.is_empty() {
            Matrix::zeros(target.dim(), 0)
        } else {
            Matrix::from_columns(target.dim(), &cols)
        };
        let f = Self {
            source,
            target,
            algebra_map,
            group_map,
        };
        f.verify()?;
        Ok(f)
    }

    fn verify(&self) -> Result<(), PairError> {
        let tol = *self.source.tolerance();
        let (gs, gt) = (self.source.algebra(), self.target.algebra());
        let a = &self.algebra_map;
        let d = gs.dim();
        let scale = gs.scale().max(gt.scale()) * (T::one() + a.max_abs()).powi(2);
        for i in 0..d {
            let ai = a.col(i);
            let th = crate::numkernel::sub(&a.matvec(&gs.theta().col(i)), &gt.apply_theta(&ai));
            if !tol.is_zero(crate::numkernel::norm(&th), scale) {
                return Err(PairError::Morphism("algebra map does not intertwine theta".into()));
            }
            for j in 0..d {
                let lhs = a.matvec(gs.basis_bracket(i, j));
                let rhs = gt.bracket(&ai, &a.col(j));
                if !tol.is_zero(crate::numkernel::norm(&crate::numkernel::sub(&lhs, &rhs)), scale) {
                    return Err(PairError::Morphism("algebra map does not preserve brackets".into()));
                }
            }
        }
        let loose = tol.loose();
        for (i, b) in self.source.basis().iter().enumerate() {
            for t in [T::c(0.5), T::c(-0.3)] {
                let g = mat_exp(&b.scale(t))?;
                let via_group = self.group_map.apply(&self.source, &g)?;
                let via_alg = mat_exp(&self.target.to_matrix(&a.col(i)).scale(t))?;
                let r = via_group.dist(&via_alg);
                if !loose.is_zero(r, via_alg.frobenius_norm()) {
                    return Err(PairError::Morphism(format!("f(exp x) != exp(Ax) (residual {:e})", r.as_f64())));
                }
                let s1 = self.group_map.apply(&self.source, &self.source.group_sigma(&g)?)?;
                let s2 = self.target.group_sigma(&via_group)?;
                if !loose.is_zero(s1.dist(&s2), s2.frobenius_norm()) {
                    return Err(PairError::Morphism("group map does not intertwine sigma".into()));
                }
            }
        }
        Ok(())
    }

    pub fn identity(p: Arc<MatrixSymmetricPair<T>>) -> Result<Self, PairError> {
        Self::new(p.clone(), p, GroupMap::Identity)
    }

    pub fn source(&self) -> &Arc<MatrixSymmetricPair<T>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MatrixSymmetricPair<T>> {
        &self.target
    }

    pub fn algebra_map(&self) -> &Matrix<T> {
        &self.algebra_map
    }

    pub fn group_map(&self) -> &GroupMap<T> {
        &self.group_map
    }

    /// Restriction of the algebra map to `g-` coordinates on both sides.
    pub fn minus_map(&self) -> Matrix<T> {
        let (gs, gt) = (self.source.algebra(), self.target.algebra());
        let ms = gs.minus().basis_matrix();
        let mt = gt.minus().basis_matrix();
        if ms.cols() == 0 || mt.cols() == 0 {
            return Matrix::zeros(mt.cols(), ms.cols());
        }
        mt.transpose().matmul(&self.algebra_map).matmul(&ms)
    }

    /// Image of a group element.
    pub fn apply_group(&self, g: &Matrix<T>) -> Result<Matrix<T>, PairError> {
        self.group_map.apply(&self.source, g)
    }

    /// Image of the word `exp(x_1) ... exp(x_m)` (letters in source `g`
    /// coordinates), cross-checked against `exp(Ax_1) ... exp(Ax_m)`.
    pub fn apply_word(&self, word: &[Vec<T>]) -> Result<Matrix<T>, PairError> {
        let n = self.source.ambient_n();
        let mut g = Matrix::identity(n);
        let mut h = Matrix::identity(self.target.ambient_n());
        for (i, x) in word.iter().enumerate() {
            if x.len() != self.source.dim() {
                return Err(PairError::Word(format!(
                    "letter {i} has {} coordinates, expected {}",
                    x.len(),
                    self.source.dim()
                )));
            }
            g = g.matmul(&mat_exp(&self.source.to_matrix(x))?);
            h = h.matmul(&mat_exp(&self.target.to_matrix(&self.algebra_map.matvec(x)))?);
        }
        let img = self.apply_group(&g)?;
        let tol = self.source.tolerance().loose();
        if !tol.is_zero(img.dist(&h), h.frobenius_norm()) {
            return Err(PairError::Morphism("group map disagrees with exp of the algebra map".into()));
        }
        Ok(img)
    }
}
