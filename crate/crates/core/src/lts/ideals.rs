//! The `psi` representation of `g+` on `g-/n` and the ideals built from it.

use super::{LinearSubspace, LtsError, SymmetricLieAlgebra};
use crate::numkernel::{nullspace, rank, unit_vector, Matrix, Tolerance};
use crate::scalar::Real;

/// Operators `psi(p_a)` on `g-/n` (one per orthonormal basis vector `p_a` of
/// `g+`) in the basis `quotient_basis` of the orthogonal complement of `n`.
#[derive(Debug, Clone)]
pub struct PsiRepresentation<T: Real> {
    pub operators: Vec<Matrix<T>>,
    /// Complement of `n` in `g-` coordinates.
    pub quotient_basis: LinearSubspace<T>,
    /// `ker psi`, as a subspace of `g`.
    pub kernel: LinearSubspace<T>,
}

fn minus_brackets<T: Real>(g: &SymmetricLieAlgebra<T>) -> Vec<Vec<T>> {
    let m = g.minus().basis();
    let mut out = Vec::new();
    for (i, x) in m.iter().enumerate() {
        for y in &m[i + 1..] {
            out.push(g.bracket(x, y));
        }
    }
    out
}

fn require_plus_generated<T: Real>(g: &SymmetricLieAlgebra<T>, tol: &Tolerance<T>) -> Result<(), LtsError> {
    let span = LinearSubspace::span(g.dim(), &minus_brackets(g), tol);
    if !span.contains_subspace(g.plus(), tol) {
        return Err(LtsError::PlusNotGenerated {
            plus_dim: g.plus().dim(),
            bracket_rank: span.dim(),
        });
    }
    Ok(())
}

fn require_ideal<T: Real>(
    g: &SymmetricLieAlgebra<T>,
    n: &LinearSubspace<T>,
    tol: &Tolerance<T>,
) -> Result<(), LtsError> {
    if n.ambient_dim() != g.minus().dim() {
        return Err(LtsError::DimensionMismatch {
            expected: g.minus().dim(),
            got: n.ambient_dim(),
        });
    }
    if !g.lts(tol)?.is_ideal(n, tol) {
        return Err(LtsError::NotIdeal);
    }
    Ok(())
}

pub fn psi_representation<T: Real>(
    g: &SymmetricLieAlgebra<T>,
    n: &LinearSubspace<T>,
    tol: &Tolerance<T>,
) -> Result<PsiRepresentation<T>, LtsError> {
    require_ideal(g, n, tol)?;
    require_plus_generated(g, tol)?;
    let q = n.complement(tol);
    let qm = q.basis_matrix();
    let mbasis = g.minus().basis_matrix();
    let operators: Vec<Matrix<T>> = g
        .plus()
        .basis()
        .iter()
        .map(|p| {
            // ad p restricted to g-, in g- coordinates
            let a = mbasis.transpose().matmul(&g.ad(p)).matmul(&mbasis);
            qm.transpose().matmul(&a).matmul(&qm)
        })
        .collect();
    let r = q.dim();
    let stacked = Matrix::from_columns(r * r, &operators.iter().map(Matrix::to_vec).collect::<Vec<_>>());
    let coeffs = if r == 0 {
        (0..operators.len()).map(|i| unit_vector(operators.len(), i)).collect()
    } else {
        nullspace(&stacked, tol)
    };
    let kernel_vecs: Vec<Vec<T>> = coeffs.iter().map(|c| g.plus().combine(c)).collect();
    Ok(PsiRepresentation {
        operators,
        quotient_basis: q,
        kernel: LinearSubspace::span(g.dim(), &kernel_vecs, tol),
    })
}

pub fn is_theta_invariant<T: Real>(g: &SymmetricLieAlgebra<T>, l: &LinearSubspace<T>, tol: &Tolerance<T>) -> bool {
    l.basis().iter().all(|v| l.contains(&g.apply_theta(v), tol))
}

/// `[l, g] ⊆ l`.
pub fn is_lie_ideal<T: Real>(g: &SymmetricLieAlgebra<T>, l: &LinearSubspace<T>, tol: &Tolerance<T>) -> bool {
    l.basis().iter().all(|v| {
        (0..g.dim()).all(|j| g.lands_in(l, &g.bracket(v, &unit_vector(g.dim(), j)), tol))
    })
}

/// `[h, h] ⊆ h`.
pub fn is_subalgebra<T: Real>(g: &SymmetricLieAlgebra<T>, h: &LinearSubspace<T>, tol: &Tolerance<T>) -> bool {
    let b = h.basis();
    b.iter().all(|x| b.iter().all(|y| g.lands_in(h, &g.bracket(x, y), tol)))
}

fn verified_ideal<T: Real>(
    g: &SymmetricLieAlgebra<T>,
    l: LinearSubspace<T>,
    what: &str,
    tol: &Tolerance<T>,
) -> Result<LinearSubspace<T>, LtsError> {
    if !is_theta_invariant(g, &l, tol) {
        return Err(LtsError::Verification(format!("{what} is not theta-invariant")));
    }
    if !is_lie_ideal(g, &l, tol) {
        return Err(LtsError::Verification(format!("{what} is not a Lie ideal")));
    }
    Ok(l)
}

/// `l = ker(psi) + n`, checked to be a theta-invariant ideal of `g`.
pub fn ideal_ker_psi_plus_n<T: Real>(
    g: &SymmetricLieAlgebra<T>,
    n: &LinearSubspace<T>,
    tol: &Tolerance<T>,
) -> Result<LinearSubspace<T>, LtsError> {
    let psi = psi_representation(g, n, tol)?;
    let l = psi.kernel.sum(&g.minus_subspace_in_g(n, tol), tol);
    verified_ideal(g, l, "ker(psi) + n", tol)
}

/// `l' = [g-, n] + n`, checked to be a theta-invariant ideal of `g`.
pub fn ideal_bracket_plus_n<T: Real>(
    g: &SymmetricLieAlgebra<T>,
    n: &LinearSubspace<T>,
    tol: &Tolerance<T>,
) -> Result<LinearSubspace<T>, LtsError> {
    require_ideal(g, n, tol)?;
    let ng = g.minus_subspace_in_g(n, tol);
    let mut vs: Vec<Vec<T>> = Vec::new();
    for x in g.minus().basis() {
        for y in ng.basis() {
            vs.push(g.bracket(x, y));
        }
    }
    vs.extend(ng.basis().iter().cloned());
    verified_ideal(g, LinearSubspace::span(g.dim(), &vs, tol), "[g-, n] + n", tol)
}

/// `[g-, g-] + g-`, checked to be a theta-invariant subalgebra.
pub fn displacement_algebra<T: Real>(
    g: &SymmetricLieAlgebra<T>,
    tol: &Tolerance<T>,
) -> Result<LinearSubspace<T>, LtsError> {
    let mut vs = minus_brackets(g);
    vs.extend(g.minus().basis().iter().cloned());
    let h = LinearSubspace::span(g.dim(), &vs, tol);
    if !is_theta_invariant(g, &h, tol) || !is_subalgebra(g, &h, tol) {
        return Err(LtsError::Verification(
            "[g-, g-] + g- is not a theta-invariant subalgebra".into(),
        ));
    }
    Ok(h)
}

/// Rank of the span of `[g-, g-]`.
pub fn bracket_rank<T: Real>(g: &SymmetricLieAlgebra<T>, tol: &Tolerance<T>) -> usize {
    let vs = minus_brackets(g);
    if vs.is_empty() {
        return 0;
    }
    rank(&Matrix::from_columns(g.dim(), &vs), tol)
}
