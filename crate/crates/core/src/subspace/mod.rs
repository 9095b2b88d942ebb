//! Reflection subspaces of a symmetric space, their Lie triple systems, and
//! the local criteria that decide when an integral subspace is symmetric.

pub mod lattice;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lattice::LineLattice;

use crate::lts::{LinearSubspace, LtsError};
use crate::numkernel::{dist_vec, inverse, norm, nullspace, scaled, sub, unit_vector, KernelError, Matrix, Tolerance};
use crate::scalar::Real;
use crate::sympair::PairError;
use crate::symspace::{SymError, SymMorphism, SymPoint, SymmetricSpace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubspaceError {
    #[error("subspace does not contain the base point (residual {0:e})")]
    NotPointed(f64),
    #[error("seed is not a triple subsystem of the ambient Lie triple system")]
    SeedNotSubsystem,
    #[error("certification failed: Exp({t} v) is not a member for v = {v:?}")]
    Certification { v: Vec<f64>, t: f64 },
    #[error("extracted subspace is not a triple subsystem")]
    NotSubsystem,
    #[error("linearization left the normal chart at the base point")]
    OutOfChart,
    #[error("no chart split found down to radius {floor:e}; witness v = {witness:?}")]
    ChartSplit { floor: f64, witness: Vec<f64> },
    #[error("F is not a complement of n in g-")]
    NotComplement,
    #[error("automorphism does not preserve the pair: {0}")]
    BadAutomorphism(String),
    #[error("{0}")]
    Verification(String),
    #[error("vector has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Answer of a membership oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    /// Outside the domain where the oracle can decide.
    Unknown,
}

impl Membership {
    pub fn is_member(self) -> bool {
        self == Membership::Member
    }
}

/// `<weights, cartan>_F = value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct AffineConstraint<T: Real> {
    pub weights: Matrix<T>,
    pub value: T,
}

#[derive(Debug, Clone)]
pub enum SubspaceKind<T: Real> {
    /// Affine constraints on the Cartan image.
    Algebraic { constraints: Vec<AffineConstraint<T>> },
    /// Fixed points of `gK -> P g P^{-1} K`.
    FixedPoints { automorphism: Matrix<T>, inverse: Matrix<T> },
    /// `<Exp(seed)>`, decided in the normal chart, or through a lattice of
    /// periods when the pair is abelian.
    Generated {
        seed: LinearSubspace<T>,
        lattice: Option<LineLattice<T>>,
    },
    /// `f^{-1}(target)`.
    Preimage {
        morphism: SymMorphism<T>,
        target: Box<ReflectionSubspace<T>>,
    },
}

/// Serialized form of the non-derived kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound(deserialize = "T: Real"))]
pub enum SubspaceDescriptor<T: Real> {
    Algebraic {
        constraints: Vec<AffineConstraint<T>>,
        label: String,
    },
    FixedPoints {
        automorphism: Matrix<T>,
        label: String,
    },
    Generated {
        seed_basis: Vec<Vec<T>>,
        #[serde(default)]
        lattice_period: Option<T>,
        #[serde(default)]
        lattice_budget: Option<u64>,
        label: String,
    },
}

/// A subset of `M` through the base point, given by a membership oracle.
#[derive(Debug, Clone)]
pub struct ReflectionSubspace<T: Real> {
    space: SymmetricSpace<T>,
    kind: SubspaceKind<T>,
    label: String,
}

impl<T: Real> ReflectionSubspace<T> {
    fn make(space: &SymmetricSpace<T>, kind: SubspaceKind<T>, label: impl Into<String>) -> Result<Self, SubspaceError> {
        let n = Self {
            space: space.clone(),
            kind,
            label: label.into(),
        };
        if let Some(r) = n.residuals(&space.base_point())? {
            let r = norm(&r);
            if !n.membership_tolerance().is_zero(r, T::one()) {
                return Err(SubspaceError::NotPointed(r.as_f64()));
            }
        }
        Ok(n)
    }

    pub fn whole(space: &SymmetricSpace<T>) -> Self {
        Self {
            space: space.clone(),
            kind: SubspaceKind::Algebraic { constraints: Vec::new() },
            label: "whole".into(),
        }
    }

    /// `{b}`: every Cartan entry equals the identity.
    pub fn base_only(space: &SymmetricSpace<T>) -> Self {
        let n = space.pair().ambient_n();
        let mut constraints = Vec::new();
        for i in 0..n {
            for j in 0..n {
                constraints.push(AffineConstraint {
                    weights: Matrix::unit(n, i, j),
                    value: if i == j { T::one() } else { T::zero() },
                });
            }
        }
        Self {
            space: space.clone(),
            kind: SubspaceKind::Algebraic { constraints },
            label: "point".into(),
        }
    }

    pub fn algebraic(
        space: &SymmetricSpace<T>,
        constraints: Vec<AffineConstraint<T>>,
        label: impl Into<String>,
    ) -> Result<Self, SubspaceError> {
        let n = space.pair().ambient_n();
        if let Some(c) = constraints.iter().find(|c| c.weights.rows() != n || c.weights.cols() != n) {
            return Err(SubspaceError::Dimension {
                expected: n,
                got: c.weights.rows(),
            });
        }
        Self::make(space, SubspaceKind::Algebraic { constraints }, label)
    }

    /// Fixed point set of conjugation by `p`, which must normalize `g` and
    /// commute with `sigma`.
    pub fn fixed_points(space: &SymmetricSpace<T>, p: Matrix<T>, label: impl Into<String>) -> Result<Self, SubspaceError> {
        let pair = space.pair();
        let n = pair.ambient_n();
        if p.rows() != n || p.cols() != n {
            return Err(SubspaceError::Dimension { expected: n, got: p.rows() });
        }
        let pi = inverse(&p).map_err(|_| SubspaceError::BadAutomorphism("not invertible".into()))?;
        let loose = pair.tolerance().loose();
        for b in pair.basis() {
            let c = p.matmul(b).matmul(&pi);
            pair.coords(&c)
                .map_err(|_| SubspaceError::BadAutomorphism("does not normalize g".into()))?;
            let g = crate::numkernel::mat_exp(&b.scale(T::c(0.7)))?;
            let lhs = pair.group_sigma(&p.matmul(&g).matmul(&pi))?;
            let rhs = p.matmul(&pair.group_sigma(&g)?).matmul(&pi);
            if !loose.is_zero(lhs.dist(&rhs), rhs.frobenius_norm()) {
                return Err(SubspaceError::BadAutomorphism("does not commute with sigma".into()));
            }
        }
        Self::make(
            space,
            SubspaceKind::FixedPoints {
                automorphism: p,
                inverse: pi,
            },
            label,
        )
    }

    /// The integral subspace `<Exp(seed)>`.
    pub fn generated(space: &SymmetricSpace<T>, seed: LinearSubspace<T>, label: impl Into<String>) -> Result<Self, SubspaceError> {
        generate_integral(&seed, space).map(|mut n| {
            n.label = label.into();
            n
        })
    }

    /// Replaces chart-local membership with a lattice search; only meaningful
    /// for lines in abelian 2-dimensional pairs.
    pub fn with_lattice(mut self, lattice: LineLattice<T>) -> Result<Self, SubspaceError> {
        match &mut self.kind {
            SubspaceKind::Generated { seed, lattice: l } if seed.dim() == 1 && seed.ambient_dim() == 2 => {
                *l = Some(lattice);
                Ok(self)
            }
            _ => Err(SubspaceError::Verification(
                "lattice oracles need a line seed in a 2-dimensional space".into(),
            )),
        }
    }

    pub fn space(&self) -> &SymmetricSpace<T> {
        &self.space
    }

    pub fn kind(&self) -> &SubspaceKind<T> {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    fn membership_tolerance(&self) -> Tolerance<T> {
        self.space.tolerance().loose()
    }

    /// Values of the defining functions at `x` (all zero on the subspace near
    /// `b`); `None` outside the domain of a chart-local description.
    pub fn residuals(&self, x: &SymPoint<T>) -> Result<Option<Vec<T>>, SubspaceError> {
        let c = x.cartan();
        Ok(match &self.kind {
            SubspaceKind::Algebraic { constraints } => Some(
                constraints
                    .iter()
                    .map(|k| k.weights.dot(c) - k.value)
                    .collect(),
            ),
            SubspaceKind::FixedPoints { automorphism, inverse } => {
                Some((&automorphism.matmul(c).matmul(inverse) - c).to_vec())
            }
            SubspaceKind::Generated { seed, .. } => match self.space.log_point(x) {
                Ok(v) => Some(sub(&v, &seed.project(&v))),
                Err(SymError::OutOfChart(_)) => None,
                Err(e) => return Err(e.into()),
            },
            SubspaceKind::Preimage { morphism, target } => target.residuals(&morphism.apply(x)?)?,
        })
    }

    pub fn membership(&self, x: &SymPoint<T>) -> Result<Membership, SubspaceError> {
        if let SubspaceKind::Preimage { morphism, target } = &self.kind {
            return target.membership(&morphism.apply(x)?);
        }
        let tol = self.membership_tolerance();
        let scale = x.cartan().frobenius_norm();
        let chart = self.residuals(x)?;
        let chart_member = chart.as_ref().map(|r| tol.is_zero(norm(r), scale));
        match (&self.kind, chart_member) {
            (_, Some(true)) => Ok(Membership::Member),
            (SubspaceKind::Generated { seed, lattice: Some(lat) }, _) => {
                let Ok(w) = self.space.log_point(x) else {
                    return Ok(Membership::Unknown);
                };
                let normal = seed.complement(self.space.tolerance()).basis()[0].clone();
                let (r, _) = lat.residual(&normal, &w);
                // the search gets within about 1/budget of any point, so only
                // roundoff-level hits count; a dense line cannot be refuted
                Ok(if self.space.tolerance().is_zero(r, T::one()) {
                    Membership::Member
                } else {
                    Membership::Unknown
                })
            }
            (_, Some(false)) => Ok(Membership::NonMember),
            (_, None) => Ok(Membership::Unknown),
        }
    }

    pub fn to_descriptor(&self) -> Option<SubspaceDescriptor<T>> {
        let label = self.label.clone();
        match &self.kind {
            SubspaceKind::Algebraic { constraints } => Some(SubspaceDescriptor::Algebraic {
                constraints: constraints.clone(),
                label,
            }),
            SubspaceKind::FixedPoints { automorphism, .. } => Some(SubspaceDescriptor::FixedPoints {
                automorphism: automorphism.clone(),
                label,
            }),
            SubspaceKind::Generated { seed, lattice } => Some(SubspaceDescriptor::Generated {
                seed_basis: seed.basis().to_vec(),
                lattice_period: lattice.as_ref().map(|l| l.period),
                lattice_budget: lattice.as_ref().map(|l| l.budget),
                label,
            }),
            SubspaceKind::Preimage { .. } => None,
        }
    }

    pub fn from_descriptor(space: &SymmetricSpace<T>, desc: &SubspaceDescriptor<T>) -> Result<Self, SubspaceError> {
        match desc {
            SubspaceDescriptor::Algebraic { constraints, label } => Self::algebraic(space, constraints.clone(), label.clone()),
            SubspaceDescriptor::FixedPoints { automorphism, label } => {
                Self::fixed_points(space, automorphism.clone(), label.clone())
            }
            SubspaceDescriptor::Generated {
                seed_basis,
                lattice_period,
                lattice_budget,
                label,
            } => {
                let d = space.dim();
                if let Some(v) = seed_basis.iter().find(|v| v.len() != d) {
                    return Err(SubspaceError::Dimension { expected: d, got: v.len() });
                }
                let seed = LinearSubspace::span(d, seed_basis, space.tolerance());
                let n = Self::generated(space, seed, label.clone())?;
                match lattice_period {
                    Some(p) => n.with_lattice(LineLattice::new(*p, lattice_budget.unwrap_or(10_000))),
                    None => Ok(n),
                }
            }
        }
    }
}

/// Result of [`lts_of_subspace`].
#[derive(Debug, Clone)]
pub struct LtsExtraction<T: Real> {
    pub subspace: LinearSubspace<T>,
    /// Grid points confirmed as members.
    pub certified: usize,
    /// Grid points the oracle could not decide.
    pub unknown: usize,
}

/// Grid of `t` values for the ray certification.
pub const CERTIFICATION_GRID: [f64; 8] = [-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0];

fn random_in_ball<T: Real, R: Rng + ?Sized>(rng: &mut R, basis: &[Vec<T>], dim: usize, r: T) -> Vec<T> {
    let coeffs: Vec<T> = basis.iter().map(|_| T::c(rng.gen_range(-1.0..1.0))).collect();
    let mut v = vec![T::zero(); dim];
    for (c, b) in coeffs.iter().zip(basis) {
        crate::numkernel::axpy(*c, b, &mut v);
    }
    let nv = norm(&v);
    if nv == T::zero() {
        return v;
    }
    let radius = r * T::c(rng.gen_range(0.05..1.0));
    scaled(radius / nv, &v)
}

/// `Log(Exp(w)) = w`.
fn in_normal_chart<T: Real>(space: &SymmetricSpace<T>, w: &[T], x: &SymPoint<T>) -> bool {
    space
        .log_point(x)
        .is_ok_and(|l| space.tolerance().loose().is_zero(dist_vec(&l, w), norm(w)))
}

/// `{x : Exp(R x) in N}`: nullspace of the linearized defining functions at
/// `b`, then certified on rays and checked to be a triple subsystem.
pub fn lts_of_subspace<T: Real>(n: &ReflectionSubspace<T>) -> Result<LtsExtraction<T>, SubspaceError> {
    let space = &n.space;
    let tol = space.tolerance();
    let d = space.dim();
    if !n.membership(&space.base_point())?.is_member() {
        return Err(SubspaceError::NotPointed(f64::NAN));
    }
    // central differences with h ~ eps^(1/3)
    let h = T::epsilon().cbrt();
    let mut cols = Vec::with_capacity(d);
    for i in 0..d {
        let e = unit_vector::<T>(d, i);
        let plus = n.residuals(&space.exp_point(&scaled(h, &e))?)?.ok_or(SubspaceError::OutOfChart)?;
        let minus = n.residuals(&space.exp_point(&scaled(-h, &e))?)?.ok_or(SubspaceError::OutOfChart)?;
        cols.push(scaled(T::one() / (T::c(2.0) * h), &sub(&plus, &minus)));
    }
    let rows = cols.first().map_or(0, Vec::len);
    let candidate = if rows == 0 || d == 0 {
        LinearSubspace::full(d)
    } else {
        let jac = Matrix::from_columns(rows, &cols);
        let scale = jac.max_abs().max(T::one());
        let cut = Tolerance::new(tol.loose().abs_eps * scale, tol.loose().rel_eps)?;
        LinearSubspace::span(d, &nullspace(&jac, &cut), tol)
    };
    let generated = matches!(n.kind, SubspaceKind::Generated { .. });
    let (mut certified, mut unknown) = (0, 0);
    for v in candidate.basis() {
        for t in CERTIFICATION_GRID {
            let w = scaled(T::c(t), v);
            let x = space.exp_point(&w)?;
            let mut verdict = n.membership(&x)?;
            // a chart-local NonMember past the injectivity radius says nothing
            // about N, whose other sheets may pass through x
            if verdict == Membership::NonMember && generated && !in_normal_chart(space, &w, &x) {
                verdict = Membership::Unknown;
            }
            match verdict {
                Membership::Member => certified += 1,
                Membership::Unknown => unknown += 1,
                Membership::NonMember => {
                    return Err(SubspaceError::Certification {
                        v: v.iter().map(|x| x.as_f64()).collect(),
                        t,
                    })
                }
            }
        }
    }
    if !space.lts_of_pair()?.is_subsystem(&candidate, tol) {
        return Err(SubspaceError::NotSubsystem);
    }
    Ok(LtsExtraction {
        subspace: candidate,
        certified,
        unknown,
    })
}

/// `<Exp(seed)>` with chart-local membership.
pub fn generate_integral<T: Real>(seed: &LinearSubspace<T>, space: &SymmetricSpace<T>) -> Result<ReflectionSubspace<T>, SubspaceError> {
    if seed.ambient_dim() != space.dim() {
        return Err(SubspaceError::Dimension {
            expected: space.dim(),
            got: seed.ambient_dim(),
        });
    }
    if !space.lts_of_pair()?.is_subsystem(seed, space.tolerance()) {
        return Err(SubspaceError::SeedNotSubsystem);
    }
    Ok(ReflectionSubspace {
        space: space.clone(),
        kind: SubspaceKind::Generated {
            seed: seed.clone(),
            lattice: None,
        },
        label: "generated".into(),
    })
}

/// Extracting the Lie triple system of `<Exp(seed)>` gives back the seed.
pub fn lts_roundtrip_check<T: Real>(seed: &LinearSubspace<T>, space: &SymmetricSpace<T>) -> bool {
    generate_integral(seed, space)
        .and_then(|n| lts_of_subspace(&n))
        .map(|e| e.subspace.same_span(seed, space.tolerance()))
        .unwrap_or(false)
}

/// Sampling parameters for the chart criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartOptions {
    pub initial_radius: f64,
    pub floor: f64,
    pub samples: usize,
}

impl Default for ChartOptions {
    fn default() -> Self {
        Self {
            initial_radius: 1.0,
            floor: 1e-3,
            samples: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartReport {
    pub radius: f64,
    /// Largest defining-function residual seen at sampled points of `n`.
    pub max_violation: f64,
    pub tested: usize,
    pub unknown: usize,
    pub halvings: usize,
}

/// First sampled point of the ball of radius `r` where `Exp(v) in N` and
/// `v in n` disagree.
fn chart_violation<T: Real, R: Rng + ?Sized>(
    big: &ReflectionSubspace<T>,
    n: &LinearSubspace<T>,
    r: T,
    samples: usize,
    rng: &mut R,
    probes: &[Vec<T>],
    report: &mut ChartReport,
) -> Result<Option<Vec<T>>, SubspaceError> {
    let space = &big.space;
    let d = space.dim();
    let tol = space.tolerance().loose();
    let all: Vec<Vec<T>> = (0..d).map(|i| unit_vector(d, i)).collect();
    for _ in 0..samples {
        if n.dim() > 0 {
            let v = random_in_ball(rng, n.basis(), d, r);
            let x = space.exp_point(&v)?;
            match big.membership(&x)? {
                Membership::NonMember => return Ok(Some(v)),
                Membership::Unknown => report.unknown += 1,
                Membership::Member => {}
            }
            if let Some(res) = big.residuals(&x)? {
                report.max_violation = report.max_violation.max(norm(&res).as_f64());
            }
            report.tested += 1;
        }
        let v = random_in_ball(rng, &all, d, r);
        if !tol.is_zero(n.residual(&v), norm(&v)) && big.membership(&space.exp_point(&v)?)?.is_member() {
            return Ok(Some(v));
        }
        report.tested += 1;
    }
    for v in probes.iter().filter(|v| norm(v) < r) {
        if !tol.is_zero(n.residual(v), norm(v)) && big.membership(&space.exp_point(v)?)?.is_member() {
            return Ok(Some(v.clone()));
        }
        report.tested += 1;
    }
    Ok(None)
}

/// Searches a radius `r` with `Exp(v) in N <=> v in n` on the ball of radius
/// `r`, halving down to the floor (which is always tried last). `probes` are
/// extra test vectors.
pub fn exp_chart_split<T: Real, R: Rng + ?Sized>(
    big: &ReflectionSubspace<T>,
    n: &LinearSubspace<T>,
    opts: &ChartOptions,
    rng: &mut R,
    probes: &[Vec<T>],
) -> Result<ChartReport, SubspaceError> {
    let mut r = opts.initial_radius.max(opts.floor);
    let mut halvings = 0;
    loop {
        let mut report = ChartReport {
            radius: r,
            max_violation: 0.0,
            tested: 0,
            unknown: 0,
            halvings,
        };
        let Some(v) = chart_violation(big, n, T::c(r), opts.samples, rng, probes, &mut report)? else {
            return Ok(report);
        };
        if r <= opts.floor {
            return Err(SubspaceError::ChartSplit {
                floor: opts.floor,
                witness: v.iter().map(|x| x.as_f64()).collect(),
            });
        }
        r = (r * 0.5).max(opts.floor);
        halvings += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    /// No sampled nonzero `w` in the `F`-ball had `Exp(w)` in `N`.
    pub holds: bool,
    pub witness: Option<Vec<f64>>,
    pub tested: usize,
    pub unknown: usize,
}

/// Falsification test of `N ∩ Exp(W) = {b}` for a ball `W` in a complement
/// `F` of `n`.
pub fn split_complement_criterion<T: Real, R: Rng + ?Sized>(
    big: &ReflectionSubspace<T>,
    n: &LinearSubspace<T>,
    f: &LinearSubspace<T>,
    radius: T,
    samples: usize,
    rng: &mut R,
    probes: &[Vec<T>],
) -> Result<SplitReport, SubspaceError> {
    let space = &big.space;
    let tol = space.tolerance();
    let d = space.dim();
    if n.ambient_dim() != d || f.ambient_dim() != d {
        return Err(SubspaceError::Dimension {
            expected: d,
            got: f.ambient_dim(),
        });
    }
    if n.dim() + f.dim() != d || n.sum(f, tol).dim() != d {
        return Err(SubspaceError::NotComplement);
    }
    let mut report = SplitReport {
        holds: true,
        witness: None,
        tested: 0,
        unknown: 0,
    };
    if f.dim() == 0 {
        return Ok(report);
    }
    let loose = tol.loose();
    let candidates = (0..samples)
        .map(|_| random_in_ball(rng, f.basis(), d, radius))
        .chain(
            probes
                .iter()
                .filter(|w| norm(w) < radius && loose.is_zero(f.residual(w), norm(w)))
                .cloned(),
        )
        .collect::<Vec<_>>();
    for w in candidates {
        if norm(&w) == T::zero() {
            continue;
        }
        report.tested += 1;
        match big.membership(&space.exp_point(&w)?)? {
            Membership::Member => {
                report.holds = false;
                report.witness = Some(w.iter().map(|x| x.as_f64()).collect());
                return Ok(report);
            }
            Membership::Unknown => report.unknown += 1,
            Membership::NonMember => {}
        }
    }
    Ok(report)
}

/// Sampled closure of `N` under `mu`, with members drawn from `Exp(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub tested: usize,
    pub unknown: usize,
    pub failures: usize,
}

pub fn mu_closure_check<T: Real, R: Rng + ?Sized>(
    big: &ReflectionSubspace<T>,
    n: &LinearSubspace<T>,
    radius: T,
    samples: usize,
    rng: &mut R,
) -> Result<ClosureReport, SubspaceError> {
    let space = &big.space;
    let d = space.dim();
    let mut report = ClosureReport {
        tested: 0,
        unknown: 0,
        failures: 0,
    };
    if n.dim() == 0 {
        return Ok(report);
    }
    for _ in 0..samples {
        let x = space.exp_point(&random_in_ball(rng, n.basis(), d, radius))?;
        let y = space.exp_point(&random_in_ball(rng, n.basis(), d, radius))?;
        report.tested += 1;
        match big.membership(&space.mu(&x, &y)?)? {
            Membership::Member => {}
            Membership::Unknown => report.unknown += 1,
            Membership::NonMember => report.failures += 1,
        }
    }
    Ok(report)
}

/// A preimage together with both descriptions of its Lie triple system.
#[derive(Debug, Clone)]
pub struct PreimageResult<T: Real> {
    pub subspace: ReflectionSubspace<T>,
    /// Extracted from the composed defining functions.
    pub extracted: LinearSubspace<T>,
    /// `A^{-1}(n2)` by a nullspace computation.
    pub algebraic: LinearSubspace<T>,
}

/// `f^{-1}(N2)`; its extracted Lie triple system is checked against `A^{-1}(n2)`.
pub fn preimage_subspace<T: Real>(f: &SymMorphism<T>, target: &ReflectionSubspace<T>) -> Result<PreimageResult<T>, SubspaceError> {
    let source = f.source();
    let tol = source.tolerance();
    let subspace = ReflectionSubspace {
        space: source.clone(),
        kind: SubspaceKind::Preimage {
            morphism: f.clone(),
            target: Box::new(target.clone()),
        },
        label: format!("preimage({})", target.label),
    };
    let extracted = lts_of_subspace(&subspace)?.subspace;
    let n2 = lts_of_subspace(target)?.subspace;
    let algebraic = n2.preimage(&f.tangent_map(), tol);
    if !extracted.same_span(&algebraic, tol) {
        return Err(SubspaceError::Verification(format!(
            "extracted preimage has dimension {}, A^-1(n2) has dimension {}",
            extracted.dim(),
            algebraic.dim()
        )));
    }
    Ok(PreimageResult {
        subspace,
        extracted,
        algebraic,
    })
}

/// `f^{-1}(b2)`, whose Lie triple system is `ker A`.
pub fn kernel_subspace<T: Real>(f: &SymMorphism<T>) -> Result<PreimageResult<T>, SubspaceError> {
    let mut r = preimage_subspace(f, &ReflectionSubspace::base_only(&f.target()))?;
    r.subspace.label = "kernel".into();
    Ok(r)
}

/// Membership along the ray through `v` on the certification grid.
pub fn ray_profile<T: Real>(big: &ReflectionSubspace<T>, v: &[T]) -> Result<Vec<(f64, Membership)>, SubspaceError> {
    CERTIFICATION_GRID
        .iter()
        .map(|&t| {
            let x = big.space.exp_point(&scaled(T::c(t), v))?;
            Ok((t, big.membership(&x)?))
        })
        .collect()
}

#[cfg(test)]
mod tests;
