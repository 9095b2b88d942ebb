//! Invariant suites run against catalog models.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::ModelDescriptor;
use crate::lts::{AxiomResidual, LieTripleSystem};
use crate::numkernel::Tolerance;
use crate::scalar::Real;
use crate::subspace::{lts_of_subspace, lts_roundtrip_check, preimage_subspace};
use crate::symspace::{SymError, SymPoint, SymmetricSpace};

/// Bounds for the sampled suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteBounds {
    pub axioms: f64,
    pub chain: f64,
    pub samples: usize,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        Self {
            axioms: 1e-8,
            chain: 1e-9,
            samples: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub model: String,
    pub checks: Vec<AxiomResidual>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&AxiomResidual> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn line(name: &str, residual: f64, bound: f64) -> AxiomResidual {
    AxiomResidual::new(name, residual, bound)
}

/// Relative Cartan distance.
fn rel<T: Real>(a: &SymPoint<T>, b: &SymPoint<T>) -> f64 {
    (a.distance(b) / (T::one() + b.cartan().frobenius_norm())).as_f64()
}

fn sample<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<T> {
    (0..d).map(|_| T::c(rng.gen_range(-0.5..0.5))).collect()
}

/// `x.x = x`, `x.(x.y) = y` and `x.(y.z) = (x.y).(x.z)` on sampled points.
pub fn reflection_axioms<T: Real, R: Rng + ?Sized>(
    space: &SymmetricSpace<T>,
    samples: usize,
    rng: &mut R,
) -> Result<[f64; 3], SymError> {
    let d = space.dim();
    let mut worst = [0.0f64; 3];
    for _ in 0..samples {
        let x = space.exp_point(&sample(rng, d))?;
        let y = space.exp_point(&sample(rng, d))?;
        let z = space.exp_point(&sample(rng, d))?;
        worst[0] = worst[0].max(rel(&space.mu(&x, &x)?, &x));
        worst[1] = worst[1].max(rel(&space.mu(&x, &space.mu(&x, &y)?)?, &y));
        let lhs = space.mu(&x, &space.mu(&y, &z)?)?;
        let rhs = space.mu(&space.mu(&x, &y)?, &space.mu(&x, &z)?)?;
        worst[2] = worst[2].max(rel(&lhs, &rhs));
    }
    Ok(worst)
}

/// Axiom lines for a bare tensor.
pub fn verify_lts<T: Real>(m: &LieTripleSystem<T>, tol: &Tolerance<T>) -> VerifyReport {
    VerifyReport {
        model: m.label().to_string(),
        checks: m.check_lts_axioms(tol).entries().iter().map(|r| (*r).clone()).collect(),
    }
}

/// LTS and symmetric-algebra axioms, reflection-space axioms, Exp identities,
/// the chain identity on 3-term words, round-trips of the designated
/// subspaces and preimage laws of the designated morphisms.
pub fn verify_model<T: Real, R: Rng + ?Sized>(
    model: &ModelDescriptor<T>,
    bounds: &SuiteBounds,
    rng: &mut R,
) -> Result<VerifyReport, SymError> {
    let space = &model.space;
    let tol = space.tolerance();
    let d = space.dim();
    let mut checks = Vec::new();
    let lts = space.lts_of_pair()?;
    for r in lts.check_lts_axioms(tol).entries() {
        checks.push(line(&format!("lts {}", r.name), r.max_residual, bounds.axioms));
    }
    for r in model.pair.algebra().check(tol).entries() {
        checks.push(line(&format!("algebra {}", r.name), r.max_residual, bounds.axioms));
    }
    let [idem, invol, auto] = reflection_axioms(space, bounds.samples, rng)?;
    checks.push(line("reflection x.x = x", idem, bounds.axioms));
    checks.push(line("reflection x.(x.y) = y", invol, bounds.axioms));
    checks.push(line("reflection x.(y.z) = (x.y).(x.z)", auto, bounds.axioms));

    let (mut exp_worst, mut chain_worst) = (0.0f64, 0.0f64);
    let b = space.base_point();
    for _ in 0..bounds.samples {
        let v: Vec<T> = sample(rng, d);
        let ev = space.exp_point(&v)?;
        // b.Exp(v) = Exp(-v) and Exp(v).b = Exp(2v)
        let neg: Vec<T> = v.iter().map(|&x| -x).collect();
        let two: Vec<T> = v.iter().map(|&x| x + x).collect();
        exp_worst = exp_worst.max(rel(&space.mu(&b, &ev)?, &space.exp_point(&neg)?));
        exp_worst = exp_worst.max(rel(&space.mu(&ev, &b)?, &space.exp_point(&two)?));
        let xs: Vec<Vec<T>> = (0..3).map(|_| sample(rng, d)).collect();
        let ys: Vec<Vec<T>> = (0..3).map(|_| sample(rng, d)).collect();
        chain_worst = chain_worst.max(space.chain_identity_check(&xs, &ys)?.as_f64());
    }
    checks.push(line("exp identities", exp_worst, bounds.axioms));
    checks.push(line("chain identity", chain_worst, bounds.chain));

    for s in &model.designated_subspaces {
        let extracted = lts_of_subspace(&s.subspace).map(|e| e.subspace.same_span(&s.lts, tol));
        let ok = extracted.unwrap_or(false) && lts_roundtrip_check(&s.lts, space);
        checks.push(line(&format!("subspace {} round-trip", s.name), if ok { 0.0 } else { 1.0 }, 0.5));
    }
    for m in &model.designated_morphisms {
        let ok = preimage_subspace(&m.morphism, &m.target_subspace).is_ok();
        checks.push(line(&format!("morphism {} preimage law", m.name), if ok { 0.0 } else { 1.0 }, 0.5));
        let mut worst = 0.0f64;
        let target = m.morphism.target();
        let a = m.morphism.tangent_map();
        for _ in 0..bounds.samples.min(20) {
            let v: Vec<T> = sample(rng, m.morphism.source().dim());
            let lhs = m.morphism.apply(&m.morphism.source().exp_point(&v)?)?;
            worst = worst.max(rel(&lhs, &target.exp_point(&a.matvec(&v))?));
        }
        checks.push(line(&format!("morphism {} exp functoriality", m.name), worst, bounds.axioms));
    }
    Ok(VerifyReport {
        model: model.name.clone(),
        checks,
    })
}
