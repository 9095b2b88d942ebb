//! Built-in models, addressed by name: `sphere(n)`, `spd(n)`,
//! `grassmann(k,n)`, `torus_abelian` and `product(a,b)`.

pub mod pairs;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pairs::{grassmann, product, sphere, spd, torus, trivial};

use crate::lts::LinearSubspace;
use crate::numkernel::{Matrix, Tolerance};
use crate::quotient::Gate;
use crate::scalar::Real;
use crate::subspace::lattice::transverse_witnesses;
use crate::subspace::{generate_integral, ChartOptions, LineLattice, ReflectionSubspace, SubspaceError};
use crate::sympair::{GroupMap, MatrixSymmetricPair, PairError, PairMorphism};
use crate::symspace::{SymMorphism, SymmetricSpace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown model '{0}' (expected sphere, spd, grassmann, torus_abelian or product)")]
    UnknownModel(String),
    #[error("bad parameters for {model}: {reason}")]
    BadParams { model: String, reason: String },
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// Parsed model name with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ModelSpec {
    Sphere { n: usize },
    Spd { n: usize },
    Grassmann { k: usize, n: usize },
    TorusAbelian,
    Product { left: Box<ModelSpec>, right: Box<ModelSpec> },
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Sphere { n } => write!(f, "sphere({n})"),
            ModelSpec::Spd { n } => write!(f, "spd({n})"),
            ModelSpec::Grassmann { k, n } => write!(f, "grassmann({k},{n})"),
            ModelSpec::TorusAbelian => write!(f, "torus_abelian"),
            ModelSpec::Product { left, right } => write!(f, "product({left},{right})"),
        }
    }
}

/// Splits `a,b` at top-level commas.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|a| !a.is_empty());
    out
}

impl ModelSpec {
    /// `name` with comma-separated `params`; empty params select defaults
    /// (`sphere(2)`, `spd(2)`, `grassmann(1,3)`, `product(sphere(2),sphere(2))`).
    pub fn from_parts(name: &str, params: &str) -> Result<Self, CatalogError> {
        let bad = |reason: String| CatalogError::BadParams {
            model: name.to_string(),
            reason,
        };
        let args = split_args(params);
        let ints = || -> Result<Vec<usize>, CatalogError> {
            args.iter()
                .map(|a| {
                    let v = a.strip_prefix("n=").or_else(|| a.strip_prefix("k=")).unwrap_or(a);
                    v.parse::<usize>().map_err(|_| bad(format!("'{a}' is not a nonnegative integer")))
                })
                .collect()
        };
        let spec = match name.trim() {
            "sphere" => match ints()?.as_slice() {
                [] => ModelSpec::Sphere { n: 2 },
                [n] => ModelSpec::Sphere { n: *n },
                _ => return Err(bad("expected one dimension".into())),
            },
            "spd" => match ints()?.as_slice() {
                [] => ModelSpec::Spd { n: 2 },
                [n] => ModelSpec::Spd { n: *n },
                _ => return Err(bad("expected one size".into())),
            },
            "grassmann" => match ints()?.as_slice() {
                [] => ModelSpec::Grassmann { k: 1, n: 3 },
                [k, n] => ModelSpec::Grassmann { k: *k, n: *n },
                _ => return Err(bad("expected k,n".into())),
            },
            "torus_abelian" | "torus" => match args.as_slice() {
                [] | ["golden"] | ["slope=golden"] => ModelSpec::TorusAbelian,
                _ => return Err(bad("only the golden slope is available".into())),
            },
            "product" => match args.as_slice() {
                [] => ModelSpec::Product {
                    left: Box::new(ModelSpec::Sphere { n: 2 }),
                    right: Box::new(ModelSpec::Sphere { n: 2 }),
                },
                [a, b] => ModelSpec::Product {
                    left: Box::new(a.parse()?),
                    right: Box::new(b.parse()?),
                },
                _ => return Err(bad("expected two factor models".into())),
            },
            other => return Err(CatalogError::UnknownModel(other.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let bad = |reason: &str| CatalogError::BadParams {
            model: self.to_string(),
            reason: reason.into(),
        };
        match self {
            ModelSpec::Sphere { n } if *n == 0 => Err(bad("n must be at least 1")),
            ModelSpec::Spd { n } if *n == 0 => Err(bad("n must be at least 1")),
            ModelSpec::Grassmann { k, n } if *k == 0 || k >= n => Err(bad("need 0 < k < n")),
            ModelSpec::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            _ => Ok(()),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = CatalogError;

    /// `name` or `name(params)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.find('(') {
            Some(i) if s.ends_with(')') => Self::from_parts(&s[..i], &s[i + 1..s.len() - 1]),
            Some(_) => Err(CatalogError::BadParams {
                model: s.to_string(),
                reason: "unbalanced parentheses".into(),
            }),
            None => Self::from_parts(s, ""),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMetadata {
    /// What `G/K` is with `K = G^sigma`.
    pub global_form: String,
    pub k_closed: bool,
    pub g_connected: bool,
    pub notes: String,
}

/// A reflection subspace with the Lie triple system it should have.
#[derive(Debug, Clone)]
pub struct DesignatedSubspace<T: Real> {
    pub name: String,
    pub subspace: ReflectionSubspace<T>,
    pub lts: LinearSubspace<T>,
}

/// What the quotient pipeline should do with a designated ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientOutcome {
    Quotient,
    GateRejected,
    NotFaithful,
}

#[derive(Debug, Clone)]
pub struct DesignatedIdeal<T: Real> {
    pub name: String,
    pub n: LinearSubspace<T>,
    pub gate: Gate<T>,
    pub expected: QuotientOutcome,
}

/// A morphism together with a subspace of its target for preimage checks.
#[derive(Debug, Clone)]
pub struct DesignatedMorphism<T: Real> {
    pub name: String,
    pub morphism: SymMorphism<T>,
    pub target_subspace: ReflectionSubspace<T>,
}

#[derive(Debug, Clone)]
pub struct ModelDescriptor<T: Real> {
    pub name: String,
    pub spec: ModelSpec,
    pub pair: Arc<MatrixSymmetricPair<T>>,
    pub space: SymmetricSpace<T>,
    pub designated_subspaces: Vec<DesignatedSubspace<T>>,
    pub designated_ideals: Vec<DesignatedIdeal<T>>,
    pub designated_morphisms: Vec<DesignatedMorphism<T>>,
    pub metadata: ModelMetadata,
}

/// Builds `name(params)`, e.g. `build_model("grassmann", "1,3")`.
pub fn build_model<T: Real>(name: &str, params: &str, tol: &Tolerance<T>) -> Result<ModelDescriptor<T>, CatalogError> {
    build_spec(&ModelSpec::from_parts(name, params)?, tol)
}

pub fn build_spec<T: Real>(spec: &ModelSpec, tol: &Tolerance<T>) -> Result<ModelDescriptor<T>, CatalogError> {
    let pair = Arc::new(pair_of(spec, tol)?);
    let space = SymmetricSpace::new(pair.clone());
    let mut m = ModelDescriptor {
        name: spec.to_string(),
        spec: spec.clone(),
        pair,
        space,
        designated_subspaces: Vec::new(),
        designated_ideals: Vec::new(),
        designated_morphisms: Vec::new(),
        metadata: metadata(spec),
    };
    designate(&mut m, tol)?;
    Ok(m)
}

/// The five default models.
pub fn all_models<T: Real>(tol: &Tolerance<T>) -> Result<Vec<ModelDescriptor<T>>, CatalogError> {
    ["sphere", "spd", "grassmann", "torus_abelian", "product"]
        .iter()
        .map(|name| build_model(name, "", tol))
        .collect()
}

pub fn pair_of<T: Real>(spec: &ModelSpec, tol: &Tolerance<T>) -> Result<MatrixSymmetricPair<T>, CatalogError> {
    Ok(match spec {
        ModelSpec::Sphere { n } => sphere(*n, tol)?,
        ModelSpec::Spd { n } => spd(*n, tol)?,
        ModelSpec::Grassmann { k, n } => grassmann(*k, *n, tol)?,
        ModelSpec::TorusAbelian => torus(tol)?,
        ModelSpec::Product { left, right } => product(&pair_of(left, tol)?, &pair_of(right, tol)?, tol)?,
    })
}

fn metadata(spec: &ModelSpec) -> ModelMetadata {
    let (global_form, g_connected, notes) = match spec {
        ModelSpec::Sphere { n } => (
            format!("RP^{n}"),
            true,
            "SO(n+1) mod S(O(n) x O(1)); the sphere modulo antipodes, same Lie triple system as S^n".to_string(),
        ),
        ModelSpec::Spd { n } => (
            format!("positive definite {n}x{n} matrices"),
            true,
            "GL+(n) mod SO(n); G is the identity component generated by exp".to_string(),
        ),
        ModelSpec::Grassmann { k, n } => (
            format!("unoriented {k}-planes in R^{n}"),
            true,
            "SO(n) mod S(O(k) x O(n-k))".to_string(),
        ),
        ModelSpec::TorusAbelian => (
            "2-torus R^2 / pi Z^2".to_string(),
            true,
            "abelian; the line of slope phi is dense, so its integral subspace is not closed".to_string(),
        ),
        ModelSpec::Product { left, right } => (
            format!("{} x {}", metadata(left).global_form, metadata(right).global_form),
            metadata(left).g_connected && metadata(right).g_connected,
            "componentwise".to_string(),
        ),
    };
    ModelMetadata {
        global_form,
        k_closed: true,
        g_connected,
        notes,
    }
}

fn golden<T: Real>() -> T {
    T::c(0.5 * (1.0 + 5f64.sqrt()))
}

/// Lattice search and transverse probes for the golden line on the torus.
pub fn dense_line_gate<T: Real>(tol: &Tolerance<T>) -> (LinearSubspace<T>, Gate<T>) {
    let n = LinearSubspace::span(2, &[vec![T::one(), golden()]], tol);
    let normal: Vec<f64> = n.complement(tol).basis()[0].iter().map(|x| x.as_f64()).collect();
    let probes = transverse_witnesses(&normal, 5000)
        .into_iter()
        .map(|v| v.into_iter().map(T::c).collect())
        .collect();
    let gate = Gate {
        chart: ChartOptions {
            samples: 50,
            ..ChartOptions::default()
        },
        lattice: Some(LineLattice::new(T::c(std::f64::consts::PI), 10_000)),
        probes,
    };
    (n, gate)
}

fn ideal<T: Real>(name: &str, n: LinearSubspace<T>, expected: QuotientOutcome) -> DesignatedIdeal<T> {
    DesignatedIdeal {
        name: name.into(),
        n,
        gate: Gate::default(),
        expected,
    }
}

fn generated<T: Real>(space: &SymmetricSpace<T>, name: &str, seed: LinearSubspace<T>) -> Result<DesignatedSubspace<T>, CatalogError> {
    Ok(DesignatedSubspace {
        name: name.into(),
        subspace: ReflectionSubspace::generated(space, seed.clone(), name)?,
        lts: seed,
    })
}

/// Reflection of coordinate `at` in `R^n`.
fn flip<T: Real>(n: usize, at: usize) -> Matrix<T> {
    let mut d = vec![T::one(); n];
    d[at] = -T::one();
    Matrix::diag(&d)
}

fn designate<T: Real>(m: &mut ModelDescriptor<T>, tol: &Tolerance<T>) -> Result<(), CatalogError> {
    let space = m.space.clone();
    let d = space.dim();
    use QuotientOutcome::*;
    match &m.spec {
        ModelSpec::Sphere { n } => {
            // conjugation by diag(.., -1 at n-1, 1) fixes the span of e_0..e_{n-2}, e_n
            let eq = ReflectionSubspace::fixed_points(&space, flip(n + 1, n - 1), "equator")?;
            m.designated_subspaces.push(DesignatedSubspace {
                name: "equator".into(),
                subspace: eq,
                lts: LinearSubspace::coordinate(d, &(0..n - 1).collect::<Vec<_>>()),
            });
            m.designated_subspaces
                .push(generated(&space, "great_circle", LinearSubspace::coordinate(d, &[0]))?);
            m.designated_ideals.push(ideal("zero", LinearSubspace::zero(d), Quotient));
            m.designated_ideals.push(ideal("full", LinearSubspace::full(d), Quotient));
        }
        ModelSpec::Spd { n } => {
            let diag = LinearSubspace::coordinate(d, &(0..*n).collect::<Vec<_>>());
            m.designated_subspaces.push(generated(&space, "diagonal", diag)?);
            let mut scalar = vec![T::zero(); d];
            scalar[..*n].fill(T::one());
            m.designated_subspaces
                .push(generated(&space, "scalar", LinearSubspace::span(d, &[scalar.clone()], tol))?);
            if *n >= 2 {
                m.designated_ideals
                    .push(ideal("scalar", LinearSubspace::span(d, &[scalar.clone()], tol), Quotient));
                let traceless = LinearSubspace::span(d, &[scalar], tol).complement(tol);
                m.designated_ideals.push(ideal("traceless", traceless, NotFaithful));
            }
            // the scalars are central in gl(n), so ad is not faithful on g/0
            m.designated_ideals.push(ideal("zero", LinearSubspace::zero(d), NotFaithful));
        }
        ModelSpec::Grassmann { k, n } => {
            m.designated_subspaces
                .push(generated(&space, "line", LinearSubspace::coordinate(d, &[0]))?);
            if n - k >= 2 {
                // planes orthogonal to e_{n-1}: a Grassmannian of R^{n-1}
                let p = flip(*n, n - 1);
                let sub = ReflectionSubspace::fixed_points(&space, p.clone(), "hyperplane")?;
                let lts = fixed_minus_directions(&space, &p, tol);
                m.designated_subspaces.push(DesignatedSubspace {
                    name: "hyperplane".into(),
                    subspace: sub,
                    lts,
                });
            }
            m.designated_ideals.push(ideal("zero", LinearSubspace::zero(d), Quotient));
        }
        ModelSpec::TorusAbelian => {
            let (line, gate) = dense_line_gate(tol);
            let dense = ReflectionSubspace::generated(&space, line.clone(), "dense_line")?
                .with_lattice(gate.lattice.clone().expect("dense line gate has a lattice"))?;
            m.designated_subspaces.push(DesignatedSubspace {
                name: "dense_line".into(),
                subspace: dense,
                lts: line.clone(),
            });
            m.designated_subspaces
                .push(generated(&space, "closed_circle", LinearSubspace::coordinate(2, &[0]))?);
            m.designated_ideals.push(DesignatedIdeal {
                name: "dense_line".into(),
                n: line,
                gate,
                expected: GateRejected,
            });
            // passes the gate, but g/l is abelian and has no faithful adjoint realization
            m.designated_ideals
                .push(ideal("closed_circle", LinearSubspace::coordinate(2, &[0]), NotFaithful));
        }
        ModelSpec::Product { left, right } => {
            let a = build_spec::<T>(left, tol)?;
            let b = build_spec::<T>(right, tol)?;
            let (da, db) = (a.space.dim(), b.space.dim());
            let first: Vec<usize> = (0..da).collect();
            let second: Vec<usize> = (da..da + db).collect();
            m.designated_subspaces
                .push(generated(&space, "first_factor", LinearSubspace::coordinate(d, &first))?);
            m.designated_subspaces
                .push(generated(&space, "second_factor", LinearSubspace::coordinate(d, &second))?);
            m.designated_ideals
                .push(ideal("first_factor", LinearSubspace::coordinate(d, &first), Quotient));
            m.designated_ideals
                .push(ideal("second_factor", LinearSubspace::coordinate(d, &second), Quotient));

            let na = a.pair.ambient_n();
            let total = na + b.pair.ambient_n();
            let project = PairMorphism::new(m.pair.clone(), a.pair.clone(), GroupMap::Project { offset: 0, size: na })?;
            let target = a
                .designated_subspaces
                .first()
                .map(|s| s.subspace.clone())
                .unwrap_or_else(|| ReflectionSubspace::base_only(&a.space));
            m.designated_morphisms.push(DesignatedMorphism {
                name: "project_first".into(),
                morphism: SymMorphism::new(project),
                target_subspace: target,
            });
            let embed = PairMorphism::new(a.pair.clone(), m.pair.clone(), GroupMap::Embed { offset: 0, total })?;
            m.designated_morphisms.push(DesignatedMorphism {
                name: "embed_first".into(),
                morphism: SymMorphism::new(embed),
                target_subspace: generate_integral(&pad(&first_lts(&a, tol), 0, d, tol), &space)?,
            });
            if left == right {
                let diag = PairMorphism::new(a.pair.clone(), m.pair.clone(), GroupMap::Diagonal)?;
                m.designated_morphisms.push(DesignatedMorphism {
                    name: "diagonal".into(),
                    morphism: SymMorphism::new(diag),
                    target_subspace: generate_integral(&diagonal_seed(da, tol), &space)?,
                });
            }
        }
    }
    Ok(())
}

/// Lie triple system of the first designated subspace, or `{0}`.
fn first_lts<T: Real>(m: &ModelDescriptor<T>, tol: &Tolerance<T>) -> LinearSubspace<T> {
    let d = m.space.dim();
    m.designated_subspaces
        .first()
        .map_or_else(|| LinearSubspace::zero(d), |s| LinearSubspace::span(d, s.lts.basis(), tol))
}

/// `n` placed at `offset` inside a space of dimension `total`.
fn pad<T: Real>(n: &LinearSubspace<T>, offset: usize, total: usize, tol: &Tolerance<T>) -> LinearSubspace<T> {
    let vs: Vec<Vec<T>> = n
        .basis()
        .iter()
        .map(|v| {
            let mut w = vec![T::zero(); total];
            w[offset..offset + v.len()].copy_from_slice(v);
            w
        })
        .collect();
    LinearSubspace::span(total, &vs, tol)
}

/// `{(v, v)}` in `g- + g-`.
fn diagonal_seed<T: Real>(d: usize, tol: &Tolerance<T>) -> LinearSubspace<T> {
    let vs: Vec<Vec<T>> = (0..d)
        .map(|i| {
            let mut w = vec![T::zero(); 2 * d];
            w[i] = T::one();
            w[d + i] = T::one();
            w
        })
        .collect();
    LinearSubspace::span(2 * d, &vs, tol)
}

/// `g-` directions fixed by conjugation with `p`.
fn fixed_minus_directions<T: Real>(space: &SymmetricSpace<T>, p: &Matrix<T>, tol: &Tolerance<T>) -> LinearSubspace<T> {
    let pair = space.pair();
    let d = space.dim();
    let cols: Vec<Vec<T>> = (0..d)
        .map(|i| {
            let e = crate::numkernel::unit_vector(d, i);
            let x = pair.minus_matrix(&e);
            let img = p.matmul(&x).matmul(p);
            let c = pair.minus_coords_of(&img).expect("p normalizes g-");
            crate::numkernel::sub(&c, &e)
        })
        .collect();
    let a = Matrix::from_columns(d, &cols);
    LinearSubspace::span(d, &crate::numkernel::nullspace(&a, tol), tol)
}

#[cfg(test)]
mod tests;
