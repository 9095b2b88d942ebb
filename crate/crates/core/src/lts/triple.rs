use serde::{Deserialize, Serialize};

use super::{AxiomResidual, LinearSubspace, LtsError, SymmetricLieAlgebra};
use crate::numkernel::{axpy, norm, orthonormal_span, sub, Matrix, Tolerance};
use crate::scalar::Real;

/// Finite-dimensional Lie triple system stored as `c[i][j][k][l]` with
/// `[e_i, e_j, e_k] = sum_l c[i][j][k][l] e_l`.
///
/// Construction only checks the tensor shape, so that broken tensors can be
/// loaded and diagnosed with [`LieTripleSystem::check_lts_axioms`].
#[derive(Debug, Clone, PartialEq)]
pub struct LieTripleSystem<T: Real> {
    dim: usize,
    tensor: Vec<T>,
    label: String,
}

impl<T: Real> LieTripleSystem<T> {
    pub fn new(dim: usize, tensor: Vec<T>, label: impl Into<String>) -> Result<Self, LtsError> {
        let want = dim.pow(4);
        if tensor.len() != want {
            return Err(LtsError::DimensionMismatch {
                expected: want,
                got: tensor.len(),
            });
        }
        if tensor.iter().any(|x| !x.is_finite()) {
            return Err(LtsError::Descriptor("non-finite structure constant".into()));
        }
        Ok(Self {
            dim,
            tensor,
            label: label.into(),
        })
    }

    /// Tabulates a trilinear map on the standard basis.
    pub fn from_fn<F>(dim: usize, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[T], &[T], &[T]) -> Vec<T>,
    {
        let e: Vec<Vec<T>> = (0..dim).map(|i| crate::numkernel::unit_vector(dim, i)).collect();
        let mut tensor = Vec::with_capacity(dim.pow(4));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let v = f(&e[i], &e[j], &e[k]);
                    assert_eq!(v.len(), dim);
                    tensor.extend(v);
                }
            }
        }
        Self {
            dim,
            tensor,
            label: label.into(),
        }
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            tensor: vec![T::zero(); dim.pow(4)],
            label: format!("abelian({dim})"),
        }
    }

    /// `[x,y,z] = <y,z> x - <x,z> y` on `R^dim`.
    pub fn curvature(dim: usize) -> Self {
        use crate::numkernel::dot;
        Self::from_fn(dim, format!("curvature({dim})"), |x, y, z| {
            let mut out = crate::numkernel::scaled(dot(y, z), x);
            axpy(-dot(x, z), y, &mut out);
            out
        })
    }

    /// `m1 + m2` with brackets acting componentwise.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let (da, db) = (a.dim, b.dim);
        let d = da + db;
        let mut tensor = vec![T::zero(); d.pow(4)];
        let idx = |i: usize, j: usize, k: usize, l: usize| ((i * d + j) * d + k) * d + l;
        for i in 0..da {
            for j in 0..da {
                for k in 0..da {
                    for l in 0..da {
                        tensor[idx(i, j, k, l)] = a.coeff(i, j, k, l);
                    }
                }
            }
        }
        for i in 0..db {
            for j in 0..db {
                for k in 0..db {
                    for l in 0..db {
                        tensor[idx(da + i, da + j, da + k, da + l)] = b.coeff(i, j, k, l);
                    }
                }
            }
        }
        Self {
            dim: d,
            tensor,
            label: format!("{}+{}", a.label, b.label),
        }
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

    #[inline]
    pub fn coeff(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        let d = self.dim;
        self.tensor[((i * d + j) * d + k) * d + l]
    }

    /// `[e_i, e_j, e_k]` as a slice.
    #[inline]
    pub fn basis_bracket(&self, i: usize, j: usize, k: usize) -> &[T] {
        let d = self.dim;
        let s = ((i * d + j) * d + k) * d;
        &self.tensor[s..s + d]
    }

    /// Largest structure constant, used as the scale for tolerances.
    pub fn scale(&self) -> T {
        self.tensor.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn bracket(&self, x: &[T], y: &[T], z: &[T]) -> Result<Vec<T>, LtsError> {
        for v in [x, y, z] {
            if v.len() != self.dim {
                return Err(LtsError::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        Ok(self.bracket_unchecked(x, y, z))
    }

    #[allow(clippy::needless_range_loop)]
    pub(crate) fn bracket_unchecked(&self, x: &[T], y: &[T], z: &[T]) -> Vec<T> {
        let d = self.dim;
        let mut out = vec![T::zero(); d];
        for i in 0..d {
            if x[i] == T::zero() {
                continue;
            }
            for j in 0..d {
                let xy = x[i] * y[j];
                if xy == T::zero() {
                    continue;
                }
                for k in 0..d {
                    let c = xy * z[k];
                    if c != T::zero() {
                        axpy(c, self.basis_bracket(i, j, k), &mut out);
                    }
                }
            }
        }
        out
    }

    /// Inner derivation `D_{x,y} = [x, y, .]` as a `dim x dim` matrix.
    pub fn derivation(&self, x: &[T], y: &[T]) -> Matrix<T> {
        let d = self.dim;
        let cols: Vec<Vec<T>> = (0..d)
            .map(|k| self.bracket_unchecked(x, y, &crate::numkernel::unit_vector(d, k)))
            .collect();
        Matrix::from_columns(d, &cols)
    }

    /// Residuals of the three defining identity families over all basis tuples.
    pub fn check_lts_axioms(&self, tol: &Tolerance<T>) -> AxiomReport {
        let d = self.dim;
        let s = self.scale();
        let e = |i: usize| crate::numkernel::unit_vector::<T>(d, i);
        let vmax = |v: &[T]| v.iter().fold(T::zero(), |m, &x| m.max(x.abs()));

        let mut a1 = T::zero();
        let mut a2 = T::zero();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let b_ijk = self.basis_bracket(i, j, k);
                    // polarized form of [x,x,y] = 0
                    let sym = crate::numkernel::add(b_ijk, self.basis_bracket(j, i, k));
                    a1 = a1.max(vmax(&sym));
                    let mut cyc = b_ijk.to_vec();
                    axpy(T::one(), self.basis_bracket(j, k, i), &mut cyc);
                    axpy(T::one(), self.basis_bracket(k, i, j), &mut cyc);
                    a2 = a2.max(vmax(&cyc));
                }
            }
        }

        let mut a3 = T::zero();
        let basis: Vec<Vec<T>> = (0..d).map(e).collect();
        for a in 0..d {
            for b in 0..d {
                let dab = self.derivation(&basis[a], &basis[b]);
                for u in 0..d {
                    let du = dab.col(u);
                    for v in 0..d {
                        let dv = dab.col(v);
                        for w in 0..d {
                            let lhs = dab.matvec(self.basis_bracket(u, v, w));
                            let mut rhs = self.bracket_unchecked(&du, &basis[v], &basis[w]);
                            axpy(T::one(), &self.bracket_unchecked(&basis[u], &dv, &basis[w]), &mut rhs);
                            axpy(T::one(), &self.bracket_unchecked(&basis[u], &basis[v], &dab.col(w)), &mut rhs);
                            a3 = a3.max(vmax(&sub(&lhs, &rhs)));
                        }
                    }
                }
            }
        }
        AxiomReport {
            antisymmetry: AxiomResidual::new("antisymmetry", a1.as_f64(), tol.threshold(s).as_f64()),
            cyclic: AxiomResidual::new("cyclic", a2.as_f64(), tol.threshold(s).as_f64()),
            derivation: AxiomResidual::new("derivation", a3.as_f64(), tol.threshold(s * s).as_f64()),
        }
    }

    /// Is `w` in `n`, measured against the size of the structure constants?
    fn lands_in(&self, n: &LinearSubspace<T>, w: &[T], tol: &Tolerance<T>) -> bool {
        let scale = norm(w).max(self.scale());
        tol.is_zero(n.residual(w), scale)
    }

    fn check_ambient(&self, n: &LinearSubspace<T>) {
        assert_eq!(n.ambient_dim(), self.dim, "subspace lives in a different space");
    }

    /// `[n, n, n] ⊆ n`.
    pub fn is_subsystem(&self, n: &LinearSubspace<T>, tol: &Tolerance<T>) -> bool {
        self.check_ambient(n);
        let b = n.basis();
        b.iter().all(|x| {
            b.iter()
                .all(|y| b.iter().all(|z| self.lands_in(n, &self.bracket_unchecked(x, y, z), tol)))
        })
    }

    /// The three one-slot ideal conditions checked separately.
    pub fn ideal_report(&self, n: &LinearSubspace<T>, tol: &Tolerance<T>) -> IdealReport {
        self.check_ambient(n);
        let e: Vec<Vec<T>> = (0..self.dim).map(|i| crate::numkernel::unit_vector(self.dim, i)).collect();
        let mut rep = IdealReport {
            left: true,
            middle: true,
            right: true,
        };
        for v in n.basis() {
            for x in &e {
                for y in &e {
                    rep.left &= self.lands_in(n, &self.bracket_unchecked(v, x, y), tol);
                    rep.middle &= self.lands_in(n, &self.bracket_unchecked(x, v, y), tol);
                    rep.right &= self.lands_in(n, &self.bracket_unchecked(x, y, v), tol);
                }
            }
        }
        rep
    }

    /// `[n, m, m] ⊆ n`.
    pub fn is_ideal(&self, n: &LinearSubspace<T>, tol: &Tolerance<T>) -> bool {
        self.ideal_report(n, tol).left
    }

    /// Quotient by an ideal on the orthogonal complement of `n`, together with
    /// the projection onto it.
    pub fn quotient_lts(
        &self,
        n: &LinearSubspace<T>,
        tol: &Tolerance<T>,
    ) -> Result<(LieTripleSystem<T>, LtsMorphism<T>), LtsError> {
        if !self.is_ideal(n, tol) {
            return Err(LtsError::NotIdeal);
        }
        let q = n.complement(tol);
        let r = q.dim();
        let lift = |v: &[T]| q.combine(v);
        let quotient = LieTripleSystem::from_fn(r, format!("{}/n", self.label), |a, b, c| {
            q.coordinates(&self.bracket_unchecked(&lift(a), &lift(b), &lift(c)))
        });
        let proj = Matrix::from_columns(self.dim, q.basis()).transpose();
        let proj = if r == 0 { Matrix::zeros(0, self.dim) } else { proj };
        let morphism = LtsMorphism::new(self.clone(), quotient.clone(), proj, tol)?;
        Ok((quotient, morphism))
    }

    /// Tensor in the basis given by the columns of `change` (`dim x dim`,
    /// invertible): `c'` with `[f_i,f_j,f_k] = sum_l c'_{ijkl} f_l`.
    pub fn change_basis(&self, change: &Matrix<T>) -> Result<Self, LtsError> {
        let inv = crate::numkernel::inverse(change)?;
        let cols: Vec<Vec<T>> = (0..self.dim).map(|j| change.col(j)).collect();
        Ok(Self::from_fn(self.dim, self.label.clone(), |a, b, c| {
            let pick = |v: &[T]| {
                let mut out = vec![T::zero(); self.dim];
                for (k, col) in cols.iter().enumerate() {
                    axpy(v[k], col, &mut out);
                }
                out
            };
            inv.matvec(&self.bracket_unchecked(&pick(a), &pick(b), &pick(c)))
        }))
    }

    /// Largest difference of structure constants with another tensor of the
    /// same dimension.
    pub fn tensor_distance(&self, other: &Self) -> Option<T> {
        if self.dim != other.dim {
            return None;
        }
        Some(
            self.tensor
                .iter()
                .zip(&other.tensor)
                .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())),
        )
    }
}

/// Outcome of [`LieTripleSystem::check_lts_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub antisymmetry: AxiomResidual,
    pub cyclic: AxiomResidual,
    pub derivation: AxiomResidual,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry.pass && self.cyclic.pass && self.derivation.pass
    }

    pub fn max_residual(&self) -> f64 {
        self.antisymmetry
            .max_residual
            .max(self.cyclic.max_residual)
            .max(self.derivation.max_residual)
    }

    pub fn entries(&self) -> [&AxiomResidual; 3] {
        [&self.antisymmetry, &self.cyclic, &self.derivation]
    }
}

/// `[n,m,m]`, `[m,n,m]` and `[m,m,n]` containment in `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealReport {
    pub left: bool,
    pub middle: bool,
    pub right: bool,
}

impl IdealReport {
    /// For a genuine LTS the left condition forces the other two.
    pub fn consistent(&self) -> bool {
        !self.left || (self.middle && self.right)
    }
}

/// Linear map between triple systems that preserves the bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct LtsMorphism<T: Real> {
    source: LieTripleSystem<T>,
    target: LieTripleSystem<T>,
    matrix: Matrix<T>,
}

impl<T: Real> LtsMorphism<T> {
    pub fn new(
        source: LieTripleSystem<T>,
        target: LieTripleSystem<T>,
        matrix: Matrix<T>,
        tol: &Tolerance<T>,
    ) -> Result<Self, LtsError> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(LtsError::DimensionMismatch {
                expected: target.dim() * source.dim(),
                got: matrix.rows() * matrix.cols(),
            });
        }
        let m = Self {
            source,
            target,
            matrix,
        };
        let r = m.residual();
        let scale = m.source.scale().max(m.target.scale()) * (T::one() + m.matrix.max_abs()).powi(3);
        if !tol.is_zero(r, scale) {
            return Err(LtsError::NotMorphism(r.as_f64()));
        }
        Ok(m)
    }

    pub fn identity(m: &LieTripleSystem<T>) -> Self {
        Self {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.dim()),
        }
    }

    pub fn source(&self) -> &LieTripleSystem<T> {
        &self.source
    }

    pub fn target(&self) -> &LieTripleSystem<T> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.matrix.matvec(v)
    }

    /// `max |A[e_i,e_j,e_k] - [Ae_i,Ae_j,Ae_k]|` over basis triples.
    pub fn residual(&self) -> T {
        let d = self.source.dim();
        let cols: Vec<Vec<T>> = (0..d).map(|j| self.matrix.col(j)).collect();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let lhs = self.matrix.matvec(self.source.basis_bracket(i, j, k));
                    let rhs = self.target.bracket_unchecked(&cols[i], &cols[j], &cols[k]);
                    worst = worst.max(sub(&lhs, &rhs).iter().fold(T::zero(), |m, x| m.max(x.abs())));
                }
            }
        }
        worst
    }

    pub fn kernel(&self, tol: &Tolerance<T>) -> LinearSubspace<T> {
        LinearSubspace::zero(self.target.dim()).preimage(&self.matrix, tol)
    }
}

/// `h = span{[x,y,.]|_n} + n` with `[D,D'] = DD' - D'D`, `[D,u] = Du` and
/// `[u,v] = D_{u,v}`; `theta` is `+1` on derivations and `-1` on `n`.
///
/// Coordinates: derivations first (an orthonormal basis of their span inside
/// `gl(n)`), then the orthonormal basis of `n`.
pub fn standard_embedding<T: Real>(
    m: &LieTripleSystem<T>,
    n: &LinearSubspace<T>,
    tol: &Tolerance<T>,
) -> Result<SymmetricLieAlgebra<T>, LtsError> {
    if !m.is_subsystem(n, tol) {
        return Err(LtsError::NotSubsystem);
    }
    let s = n.dim();
    let u = n.basis();
    // restricted derivations in n-coordinates, flattened row-major
    let restricted = |x: &[T], y: &[T]| -> Matrix<T> {
        let cols: Vec<Vec<T>> = u.iter().map(|w| n.coordinates(&m.bracket_unchecked(x, y, w))).collect();
        Matrix::from_columns(s, &cols)
    };
    let mut ders = Vec::new();
    for i in 0..s {
        for j in 0..s {
            ders.push(restricted(&u[i], &u[j]));
        }
    }
    let flat: Vec<Vec<T>> = ders.iter().map(Matrix::to_vec).collect();
    let plus = orthonormal_span(s * s, &flat, tol);
    let p = plus.len();
    let plus_mats: Vec<Matrix<T>> = plus
        .iter()
        .map(|v| Matrix::from_vec(s, s, v.clone()).expect("finite"))
        .collect();
    let plus_coords = |mat: &Matrix<T>| -> Result<Vec<T>, LtsError> {
        let v = mat.to_vec();
        let c: Vec<T> = plus.iter().map(|b| crate::numkernel::dot(b, &v)).collect();
        let mut back = vec![T::zero(); s * s];
        for (ci, b) in c.iter().zip(&plus) {
            axpy(*ci, b, &mut back);
        }
        let scale = norm(&v).max(m.scale());
        if !tol.loose().is_zero(norm(&sub(&v, &back)), scale) {
            return Err(LtsError::Verification("derivation bracket leaves the derivation span".into()));
        }
        Ok(c)
    };

    let d = p + s;
    let mut tensor = vec![T::zero(); d * d * d];
    let mut put = |a: usize, b: usize, v: &[T], offset: usize| {
        for (l, &x) in v.iter().enumerate() {
            tensor[(a * d + b) * d + offset + l] = x;
        }
    };
    for a in 0..p {
        for b in 0..p {
            let c = plus_coords(&plus_mats[a].commutator(&plus_mats[b]))?;
            put(a, b, &c, 0);
        }
        for j in 0..s {
            let col = plus_mats[a].col(j);
            put(a, p + j, &col, p);
            put(p + j, a, &crate::numkernel::scaled(-T::one(), &col), p);
        }
    }
    for i in 0..s {
        for j in 0..s {
            let c = plus_coords(&ders[i * s + j])?;
            put(p + i, p + j, &c, 0);
        }
    }
    let mut theta_diag = vec![T::one(); p];
    theta_diag.extend(std::iter::repeat_n(-T::one(), s));
    SymmetricLieAlgebra::new(
        d,
        tensor,
        Matrix::diag(&theta_diag),
        format!("std({})", m.label()),
        tol,
    )
}
