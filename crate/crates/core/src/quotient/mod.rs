//! Congruence relations, normal subspaces and quotients `M/N` by ideals of
//! the Lie triple system.
//!
//! The quotient group is realized as the image of `G` acting on `g/l` by the
//! adjoint action, which requires `ker ad_{g/l} = l`; that is checked.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lts::{
    ideal_bracket_plus_n, ideal_ker_psi_plus_n, is_lie_ideal, is_theta_invariant, LieTripleSystem, LinearSubspace,
    LtsError,
};
use crate::numkernel::{inverse, nullspace, rank, KernelError, Matrix};
use crate::scalar::Real;
use crate::subspace::{
    exp_chart_split, generate_integral, lts_of_subspace, split_complement_criterion, ChartOptions, ChartReport,
    LineLattice, Membership, ReflectionSubspace, SplitReport, SubspaceError,
};
use crate::sympair::{GroupMap, MatrixSymmetricPair, PairError, PairMorphism, SigmaRule};
use crate::symspace::{SymError, SymMorphism, SymPoint, SymmetricSpace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuotientError {
    #[error("subspace has ambient dimension {got}, g- has dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("subspace is not an ideal of the Lie triple system")]
    NotIdeal,
    #[error("N is not a symmetric subspace ({stage} failed, witness {witness:?}); no quotient exists as a weak submersion")]
    GateRejected { stage: String, witness: Vec<f64> },
    #[error("ad on g/l has a kernel of dimension {kernel_dim}, l has dimension {l_dim}; no faithful matrix realization")]
    NotFaithful { kernel_dim: usize, l_dim: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

fn require_ideal<T: Real>(space: &SymmetricSpace<T>, n: &LinearSubspace<T>) -> Result<LieTripleSystem<T>, QuotientError> {
    if n.ambient_dim() != space.dim() {
        return Err(QuotientError::Dimension {
            expected: space.dim(),
            got: n.ambient_dim(),
        });
    }
    let m = space.lts_of_pair()?;
    if !m.is_ideal(n, space.tolerance()) {
        return Err(QuotientError::NotIdeal);
    }
    Ok(m)
}

/// `x ~ y` iff `x.rep^{-1} y.rep` lies in `LK`, decided by membership of its
/// image in the class `N` of the base point.
#[derive(Debug, Clone)]
pub struct CongruenceRelation<T: Real> {
    space: SymmetricSpace<T>,
    l: LinearSubspace<T>,
    n: LinearSubspace<T>,
    class: ReflectionSubspace<T>,
}

impl<T: Real> CongruenceRelation<T> {
    fn build(
        space: &SymmetricSpace<T>,
        l: LinearSubspace<T>,
        n: &LinearSubspace<T>,
        lattice: Option<LineLattice<T>>,
    ) -> Result<Self, QuotientError> {
        let mut class = generate_integral(n, space)?;
        if let Some(lat) = lattice {
            class = class.with_lattice(lat)?;
        }
        Ok(Self {
            space: space.clone(),
            l,
            n: n.clone(),
            class,
        })
    }

    pub fn space(&self) -> &SymmetricSpace<T> {
        &self.space
    }

    /// The ideal `l` of `g`, in `g` coordinates.
    pub fn l_algebra(&self) -> &LinearSubspace<T> {
        &self.l
    }

    /// `l ∩ g-`, in `g-` coordinates.
    pub fn n(&self) -> &LinearSubspace<T> {
        &self.n
    }

    /// Class of the base point.
    pub fn class(&self) -> &ReflectionSubspace<T> {
        &self.class
    }

    /// Chart-local: `Unknown` when `x.rep^{-1} y.rep` leaves the chart.
    pub fn relates(&self, x: &SymPoint<T>, y: &SymPoint<T>) -> Result<Membership, QuotientError> {
        let xi = inverse(x.rep()).map_err(|_| PairError::Singular)?;
        let w = self.space.point(xi.matmul(y.rep()))?;
        Ok(self.class.membership(&w)?)
    }
}

/// The relation of the connected integral subspace with Lie triple system
/// `n`, with `l' = [g-, n] + n`.
pub fn congruence_from_ideal<T: Real>(
    space: &SymmetricSpace<T>,
    n: &LinearSubspace<T>,
) -> Result<CongruenceRelation<T>, QuotientError> {
    require_ideal(space, n)?;
    let l = ideal_bracket_plus_n(space.pair().algebra(), n, space.tolerance())?;
    CongruenceRelation::build(space, l, n, None)
}

/// The Lie triple system of `N` is an ideal of the ambient one.
pub fn normal_lts_is_ideal<T: Real>(big: &ReflectionSubspace<T>) -> Result<bool, QuotientError> {
    let space = big.space();
    let extracted = lts_of_subspace(big)?.subspace;
    Ok(space.lts_of_pair()?.is_ideal(&extracted, space.tolerance()))
}

/// Inputs of the symmetric-subspace gate.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate<T: Real> {
    pub chart: ChartOptions,
    /// Replaces chart-local membership in `N` by a lattice search.
    pub lattice: Option<LineLattice<T>>,
    /// Extra test vectors for both criteria.
    pub probes: Vec<Vec<T>>,
}

impl<T: Real> Default for Gate<T> {
    fn default() -> Self {
        Self {
            chart: ChartOptions::default(),
            lattice: None,
            probes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuotientResult<T: Real> {
    pub source: SymmetricSpace<T>,
    pub n: LinearSubspace<T>,
    /// `ker(psi) + n`.
    pub l: LinearSubspace<T>,
    /// `[g-, n] + n`.
    pub l_prime: LinearSubspace<T>,
    /// Orthonormal basis of the complement of `l` in `g`, `g+` part first.
    pub quotient_basis: Vec<Vec<T>>,
    pub quotient: SymmetricSpace<T>,
    pub projection: SymMorphism<T>,
    /// `g- -> (g/l)-`.
    pub projection_algebra: Matrix<T>,
    /// Largest `|ad_{g/l}(x)|` over a basis of `l`.
    pub faithfulness_residual: f64,
    pub chart: ChartReport,
    pub split: SplitReport,
    lattice: Option<LineLattice<T>>,
}

impl<T: Real> QuotientResult<T> {
    pub fn project(&self, x: &SymPoint<T>) -> Result<SymPoint<T>, QuotientError> {
        Ok(self.projection.apply(x)?)
    }

    /// The congruence relation with class `N`, carrying `l = ker(psi) + n`.
    pub fn relation(&self) -> Result<CongruenceRelation<T>, QuotientError> {
        CongruenceRelation::build(&self.source, self.l.clone(), &self.n, self.lattice.clone())
    }

    /// Lie triple system of the quotient in the basis of `quotient_lts(m, n)`.
    pub fn aligned_quotient_lts(&self) -> Result<LieTripleSystem<T>, QuotientError> {
        let tol = self.source.tolerance();
        let fc = self.n.complement(tol);
        let r = fc.dim();
        if r == 0 {
            return Ok(LieTripleSystem::abelian(0));
        }
        let lift = Matrix::from_columns(self.n.ambient_dim(), fc.basis());
        let change = self.projection_algebra.matmul(&lift);
        if change.rows() != r {
            return Err(QuotientError::Verification(format!(
                "projection has {} rows, quotient has dimension {r}",
                change.rows()
            )));
        }
        Ok(self.quotient.lts_of_pair()?.change_basis(&change)?)
    }
}

/// `(ad_{g/l} a)_{ij} = <q_i, [a, q_j]>` for an orthonormal basis `q` of the
/// complement of `l`.
fn ad_quotient<T: Real>(pair: &MatrixSymmetricPair<T>, q: &[Vec<T>], a: &[T]) -> Matrix<T> {
    let g = pair.algebra();
    let m = q.len();
    let mut out = Matrix::zeros(m, m);
    for (j, qj) in q.iter().enumerate() {
        let b = g.bracket(a, qj);
        for (i, qi) in q.iter().enumerate() {
            out[(i, j)] = crate::numkernel::dot(qi, &b);
        }
    }
    out
}

fn gate_witness(stage: &str, witness: Vec<f64>) -> QuotientError {
    QuotientError::GateRejected {
        stage: stage.into(),
        witness,
    }
}

/// Builds `M/N` for an ideal `n` once `N = <Exp n>` passes the
/// symmetric-subspace gate: `l = ker(psi) + n`, `G/L` realized through the
/// adjoint action on `g/l`, and the projection `M -> M/N`.
pub fn quotient_theorem_pipeline<T: Real, R: Rng + ?Sized>(
    space: &SymmetricSpace<T>,
    n: &LinearSubspace<T>,
    gate: &Gate<T>,
    rng: &mut R,
) -> Result<QuotientResult<T>, QuotientError> {
    require_ideal(space, n)?;
    let tol = *space.tolerance();
    let pair = space.pair();
    let g = pair.algebra();

    let mut big = generate_integral(n, space)?;
    if let Some(lat) = &gate.lattice {
        big = big.with_lattice(lat.clone())?;
    }
    let chart = match exp_chart_split(&big, n, &gate.chart, rng, &gate.probes) {
        Ok(r) => r,
        Err(SubspaceError::ChartSplit { witness, .. }) => return Err(gate_witness("exp chart split", witness)),
        Err(e) => return Err(e.into()),
    };
    let f = n.complement(&tol);
    let split = split_complement_criterion(
        &big,
        n,
        &f,
        T::c(chart.radius),
        gate.chart.samples,
        rng,
        &gate.probes,
    )?;
    if !split.holds {
        return Err(gate_witness("complement criterion", split.witness.clone().unwrap_or_default()));
    }

    let l = ideal_ker_psi_plus_n(g, n, &tol)?;
    let l_prime = ideal_bracket_plus_n(g, n, &tol)?;
    if !l.contains_subspace(&l_prime, &tol) {
        return Err(QuotientError::Verification("[g-, n] + n is not contained in ker(psi) + n".into()));
    }
    let l_plus = l.intersection(g.plus(), &tol);
    let mut q: Vec<Vec<T>> = l_plus.complement(&tol).intersection(g.plus(), &tol).basis().to_vec();
    let q_minus = f.basis().iter().map(|v| g.embed_minus(v));
    let plus_count = q.len();
    q.extend(q_minus);
    let m = q.len();
    if m + l.dim() != g.dim() {
        return Err(QuotientError::Verification(format!(
            "complement of l has dimension {m}, expected {}",
            g.dim() - l.dim()
        )));
    }

    // faithfulness: ker(a -> ad_{g/l} a) must be exactly l
    let d = g.dim();
    let stacked = Matrix::from_columns(
        m * m,
        &(0..d)
            .map(|k| ad_quotient(pair, &q, &crate::numkernel::unit_vector(d, k)).to_vec())
            .collect::<Vec<_>>(),
    );
    let kernel = LinearSubspace::span(d, &nullspace(&stacked, &tol), &tol);
    if !kernel.same_span(&l, &tol) {
        return Err(QuotientError::NotFaithful {
            kernel_dim: kernel.dim(),
            l_dim: l.dim(),
        });
    }
    let faithfulness_residual = l
        .basis()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(ad_quotient(pair, &q, v).frobenius_norm().as_f64()));

    let label = format!("{}/n", pair.label());
    let (qpair, group_map) = if m == 0 {
        (crate::catalog::trivial(&tol)?, GroupMap::Trivial)
    } else {
        let basis: Vec<Matrix<T>> = q.iter().map(|v| ad_quotient(pair, &q, v)).collect();
        let signs: Vec<T> = (0..m).map(|i| if i < plus_count { T::one() } else { -T::one() }).collect();
        let qp = MatrixSymmetricPair::new(
            m,
            basis,
            SigmaRule::Conjugation {
                theta_matrix: Matrix::diag(&signs),
            },
            label.clone(),
            &tol,
        )?;
        let lifts = q.iter().map(|v| pair.to_matrix(v)).collect();
        let proj = Matrix::from_columns(d, &q).transpose();
        (qp, GroupMap::Adjoint { lifts, proj })
    };
    let qpair = Arc::new(qpair);
    let morphism = PairMorphism::new(pair.clone(), qpair.clone(), group_map)?;
    let projection_algebra = morphism.minus_map();
    Ok(QuotientResult {
        source: space.clone(),
        n: n.clone(),
        l,
        l_prime,
        quotient_basis: q,
        quotient: SymmetricSpace::new(qpair),
        projection: SymMorphism::new(morphism),
        projection_algebra,
        faithfulness_residual,
        chart,
        split,
        lattice: gate.lattice.clone(),
    })
}

fn sample_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<T> {
    (0..d).map(|_| T::c(rng.gen_range(-0.5..0.5))).collect()
}

/// Outcome of [`weak_submersion_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmersionReport {
    pub quotient_dim: usize,
    pub projection_rank: usize,
    pub kernel_is_n: bool,
    pub exp_pass_rate: f64,
    pub morphism_pass_rate: f64,
}

impl SubmersionReport {
    pub fn holds(&self) -> bool {
        self.projection_rank == self.quotient_dim
            && self.kernel_is_n
            && self.exp_pass_rate == 1.0
            && self.morphism_pass_rate == 1.0
    }
}

fn rate(pass: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        pass as f64 / total as f64
    }
}

/// Rank checks on `projection_algebra`, then `pi(Exp v) = Exp(A v)` and
/// `pi(x . y) = pi(x) . pi(y)` on sampled points.
pub fn weak_submersion_check<T: Real, R: Rng + ?Sized>(
    qr: &QuotientResult<T>,
    samples: usize,
    rng: &mut R,
) -> Result<SubmersionReport, QuotientError> {
    let tol = qr.source.tolerance().loose();
    let a = &qr.projection_algebra;
    let d = qr.source.dim();
    let quotient_dim = qr.quotient.dim();
    let shape_ok = a.rows() == quotient_dim && a.cols() == d;
    let projection_rank = if a.rows() == 0 || a.cols() == 0 { 0 } else { rank(a, &tol) };
    let kernel = if a.rows() == 0 {
        LinearSubspace::full(d)
    } else {
        LinearSubspace::span(d, &nullspace(a, &tol), &tol)
    };
    let mut report = SubmersionReport {
        quotient_dim,
        projection_rank: if shape_ok { projection_rank } else { usize::MAX },
        kernel_is_n: kernel.same_span(&qr.n, &tol),
        exp_pass_rate: 0.0,
        morphism_pass_rate: 0.0,
    };
    if !shape_ok {
        return Ok(report);
    }
    let (mut exp_ok, mut mor_ok) = (0, 0);
    for _ in 0..samples {
        let v = sample_vector::<T, _>(rng, d);
        let w = sample_vector::<T, _>(rng, d);
        let (x, y) = (qr.source.exp_point(&v)?, qr.source.exp_point(&w)?);
        let px = qr.project(&x)?;
        if px.same_point(&qr.quotient.exp_point(&a.matvec(&v))?, &tol) {
            exp_ok += 1;
        }
        let lhs = qr.project(&qr.source.mu(&x, &y)?)?;
        let rhs = qr.quotient.mu(&px, &qr.project(&y)?)?;
        if lhs.same_point(&rhs, &tol) {
            mor_ok += 1;
        }
    }
    report.exp_pass_rate = rate(exp_ok, samples);
    report.morphism_pass_rate = rate(mor_ok, samples);
    Ok(report)
}

/// Agreement of `relates(x, y)` with `pi(x) = pi(y)` on decided samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRelationReport {
    pub related_samples: usize,
    pub unrelated_samples: usize,
    pub agreements: usize,
    pub unknown: usize,
}

impl KernelRelationReport {
    pub fn holds(&self) -> bool {
        self.agreements == self.related_samples + self.unrelated_samples - self.unknown
    }
}

/// Half the pairs are `(x, x exp(c))` with `c` in `n`, the rest independent.
pub fn kernel_relation_check<T: Real, R: Rng + ?Sized>(
    qr: &QuotientResult<T>,
    samples: usize,
    rng: &mut R,
) -> Result<KernelRelationReport, QuotientError> {
    let rel = qr.relation()?;
    let space = &qr.source;
    let tol = space.tolerance().loose();
    let d = space.dim();
    let mut report = KernelRelationReport {
        related_samples: 0,
        unrelated_samples: 0,
        agreements: 0,
        unknown: 0,
    };
    for i in 0..samples {
        let x = space.exp_point(&sample_vector::<T, _>(rng, d))?;
        let y = if i % 2 == 0 && qr.n.dim() > 0 {
            report.related_samples += 1;
            let c = qr.n.project(&sample_vector::<T, _>(rng, d));
            let e = crate::numkernel::mat_exp(&space.pair().minus_matrix(&c))?;
            space.point(x.rep().matmul(&e))?
        } else {
            report.unrelated_samples += 1;
            space.exp_point(&sample_vector::<T, _>(rng, d))?
        };
        let same = qr.project(&x)?.same_point(&qr.project(&y)?, &tol);
        match rel.relates(&x, &y)? {
            Membership::Unknown => report.unknown += 1,
            m => {
                if m.is_member() == same {
                    report.agreements += 1;
                }
            }
        }
    }
    Ok(report)
}

/// A sequence of related pairs converging to `limit`.
#[derive(Debug, Clone)]
pub struct ConvergentSequence<T: Real> {
    pub pairs: Vec<(SymPoint<T>, SymPoint<T>)>,
    pub limit: (SymPoint<T>, SymPoint<T>),
    /// Relatedness of the limit from an exact oracle, used when the chart
    /// answer is `Unknown`.
    pub limit_exact: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationClosureReport {
    pub holds: bool,
    /// Index of the first sequence whose limit escapes the relation.
    pub witness: Option<usize>,
    pub tested: usize,
    pub unknown: usize,
    /// Terms that were not decided as related.
    pub bad_terms: usize,
}

/// Sequential closedness of `R`: limits of related pairs are related.
pub fn relation_closure_check<T: Real>(
    rel: &CongruenceRelation<T>,
    sequences: &[ConvergentSequence<T>],
) -> Result<RelationClosureReport, QuotientError> {
    let mut report = RelationClosureReport {
        holds: true,
        witness: None,
        tested: 0,
        unknown: 0,
        bad_terms: 0,
    };
    for (i, s) in sequences.iter().enumerate() {
        for (x, y) in &s.pairs {
            if !rel.relates(x, y)?.is_member() {
                report.bad_terms += 1;
            }
        }
        report.tested += 1;
        let decided = match rel.relates(&s.limit.0, &s.limit.1)? {
            Membership::Member => Some(true),
            Membership::NonMember => Some(false),
            Membership::Unknown => s.limit_exact,
        };
        match decided {
            None => report.unknown += 1,
            Some(true) => {}
            Some(false) => {
                if report.holds {
                    report.witness = Some(i);
                }
                report.holds = false;
            }
        }
    }
    Ok(report)
}

/// Generic sequences `(Exp(a + e_i u), Exp(a + c + e_i u))` with `c` in `n`,
/// `e_i = 2^-i`, converging to `(Exp a, Exp(a + c))`.
pub fn shrinking_sequences<T: Real, R: Rng + ?Sized>(
    rel: &CongruenceRelation<T>,
    count: usize,
    terms: usize,
    rng: &mut R,
) -> Result<Vec<ConvergentSequence<T>>, QuotientError> {
    let space = rel.space();
    let d = space.dim();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let a: Vec<T> = sample_vector(rng, d);
        let c = rel.n().project(&sample_vector::<T, _>(rng, d));
        let u: Vec<T> = sample_vector(rng, d);
        let at = |eps: T| -> Result<(SymPoint<T>, SymPoint<T>), QuotientError> {
            let base = crate::numkernel::add(&a, &crate::numkernel::scaled(eps, &u));
            let x = space.exp_point(&base)?;
            // x exp(c) keeps the pair related whether or not a and c commute
            let e = crate::numkernel::mat_exp(&space.pair().minus_matrix(&c))?;
            Ok((x.clone(), space.point(x.rep().matmul(&e))?))
        };
        let pairs = (1..=terms)
            .map(|i| at(T::c(0.5f64.powi(i as i32))))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(ConvergentSequence {
            pairs,
            limit: at(T::zero())?,
            limit_exact: None,
        });
    }
    Ok(out)
}

/// Sampled congruence axioms of a relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub reflexive: f64,
    pub symmetric: f64,
    pub transitive: f64,
    /// `x1 ~ y1, x2 ~ y2 => x1.x2 ~ y1.y2`.
    pub mu_compatible: f64,
    /// `x ~ y => z.x ~ z.y`.
    pub inner_invariant: f64,
    pub unknown: usize,
}

impl CongruenceReport {
    pub fn holds(&self) -> bool {
        [
            self.reflexive,
            self.symmetric,
            self.transitive,
            self.mu_compatible,
            self.inner_invariant,
        ]
        .iter()
        .all(|&r| r == 1.0)
    }
}

fn related_to<T: Real, R: Rng + ?Sized>(
    rel: &CongruenceRelation<T>,
    x: &SymPoint<T>,
    rng: &mut R,
) -> Result<SymPoint<T>, QuotientError> {
    let space = rel.space();
    let c = rel.n().project(&sample_vector::<T, _>(rng, space.dim()));
    let e = crate::numkernel::mat_exp(&space.pair().minus_matrix(&c))?;
    Ok(space.point(x.rep().matmul(&e))?)
}

/// Tallies a sampled implication; undecided conclusions count as unknown.
struct Tally {
    pass: usize,
    total: usize,
}

impl Tally {
    fn record(&mut self, m: Membership, unknown: &mut usize) {
        match m {
            Membership::Unknown => *unknown += 1,
            Membership::Member => {
                self.pass += 1;
                self.total += 1;
            }
            Membership::NonMember => self.total += 1,
        }
    }

    fn rate(&self) -> f64 {
        rate(self.pass, self.total)
    }
}

pub fn congruence_check<T: Real, R: Rng + ?Sized>(
    rel: &CongruenceRelation<T>,
    samples: usize,
    rng: &mut R,
) -> Result<CongruenceReport, QuotientError> {
    let space = rel.space();
    let d = space.dim();
    let mut unknown = 0;
    let mut t: [Tally; 5] = std::array::from_fn(|_| Tally { pass: 0, total: 0 });
    for _ in 0..samples {
        let x = space.exp_point(&sample_vector::<T, _>(rng, d))?;
        let y = related_to(rel, &x, rng)?;
        let z = related_to(rel, &y, rng)?;
        t[0].record(rel.relates(&x, &x)?, &mut unknown);
        t[1].record(rel.relates(&y, &x)?, &mut unknown);
        t[2].record(rel.relates(&x, &z)?, &mut unknown);
        let x2 = space.exp_point(&sample_vector::<T, _>(rng, d))?;
        let y2 = related_to(rel, &x2, rng)?;
        t[3].record(rel.relates(&space.mu(&x, &x2)?, &space.mu(&y, &y2)?)?, &mut unknown);
        let w = space.exp_point(&sample_vector::<T, _>(rng, d))?;
        t[4].record(rel.relates(&space.mu(&w, &x)?, &space.mu(&w, &y)?)?, &mut unknown);
    }
    Ok(CongruenceReport {
        reflexive: t[0].rate(),
        symmetric: t[1].rate(),
        transitive: t[2].rate(),
        mu_compatible: t[3].rate(),
        inner_invariant: t[4].rate(),
        unknown,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankChecks {
    pub l_dim: usize,
    pub l_prime_dim: usize,
    pub l_contains_l_prime: bool,
    pub l_theta_invariant: bool,
    pub l_lie_ideal: bool,
    pub quotient_dim: usize,
    pub projection_rank: usize,
    pub kernel_is_n: bool,
}

/// Serializable pipeline report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub l_basis: Vec<Vec<f64>>,
    pub faithfulness_residual: f64,
    pub quotient_tensor: Vec<f64>,
    /// Distance of the quotient tensor to `quotient_lts(m, n)` after aligning bases.
    pub tensor_mismatch: f64,
    pub rank_checks: RankChecks,
    pub sample_pass_rates: BTreeMap<String, f64>,
}

pub fn quotient_report<T: Real, R: Rng + ?Sized>(
    qr: &QuotientResult<T>,
    samples: usize,
    rng: &mut R,
) -> Result<QuotientReport, QuotientError> {
    let tol = qr.source.tolerance();
    let g = qr.source.pair().algebra();
    let aligned = qr.aligned_quotient_lts()?;
    let (expected, _) = qr.source.lts_of_pair()?.quotient_lts(&qr.n, tol)?;
    let tensor_mismatch = aligned.tensor_distance(&expected).map_or(f64::INFINITY, |x| x.as_f64());
    let sub = weak_submersion_check(qr, samples, rng)?;
    let kernel = kernel_relation_check(qr, samples, rng)?;
    let congruence = congruence_check(&qr.relation()?, samples, rng)?;
    let mut rates = BTreeMap::new();
    rates.insert("exp_functoriality".to_string(), sub.exp_pass_rate);
    rates.insert("projection_morphism".to_string(), sub.morphism_pass_rate);
    let decided = kernel.related_samples + kernel.unrelated_samples - kernel.unknown;
    rates.insert("kernel_relation".to_string(), rate(kernel.agreements, decided));
    rates.insert("relation_mu_compatible".to_string(), congruence.mu_compatible);
    rates.insert("relation_inner_invariant".to_string(), congruence.inner_invariant);
    let f64s = |v: &[T]| v.iter().map(|x| x.as_f64()).collect::<Vec<_>>();
    Ok(QuotientReport {
        l_basis: qr.l.basis().iter().map(|v| f64s(v)).collect(),
        faithfulness_residual: qr.faithfulness_residual,
        quotient_tensor: f64s(qr.quotient.lts_of_pair()?.tensor()),
        tensor_mismatch,
        rank_checks: RankChecks {
            l_dim: qr.l.dim(),
            l_prime_dim: qr.l_prime.dim(),
            l_contains_l_prime: qr.l.contains_subspace(&qr.l_prime, tol),
            l_theta_invariant: is_theta_invariant(g, &qr.l, tol),
            l_lie_ideal: is_lie_ideal(g, &qr.l, tol),
            quotient_dim: sub.quotient_dim,
            projection_rank: sub.projection_rank,
            kernel_is_n: sub.kernel_is_n,
        },
        sample_pass_rates: rates,
    })
}

impl QuotientReport {
    pub fn passed(&self, tensor_tol: f64) -> bool {
        let r = &self.rank_checks;
        self.tensor_mismatch <= tensor_tol
            && r.l_contains_l_prime
            && r.l_theta_invariant
            && r.l_lie_ideal
            && r.projection_rank == r.quotient_dim
            && r.kernel_is_n
            && self.sample_pass_rates.values().all(|&p| p == 1.0)
    }
}
