//! Lie triple systems and symmetric Lie algebras given by structure tensors.
//!
//! Closures of spans are plain linear spans: everything here is finite
//! dimensional.

mod algebra;
mod descriptor;
mod ideals;
mod subspace;
mod triple;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numkernel::KernelError;

pub use algebra::{AlgebraReport, SymmetricLieAlgebra};
pub use descriptor::{AlgebraDescriptor, LtsDescriptor};
pub use ideals::{
    bracket_rank, displacement_algebra, ideal_bracket_plus_n, ideal_ker_psi_plus_n, is_lie_ideal, is_subalgebra,
    is_theta_invariant, psi_representation, PsiRepresentation,
};
pub use subspace::LinearSubspace;
pub use triple::{standard_embedding, AxiomReport, IdealReport, LieTripleSystem, LtsMorphism};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LtsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not a triple subsystem")]
    NotSubsystem,
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("linear map is not a morphism (residual {0:e})")]
    NotMorphism(f64),
    #[error("g+ is not spanned by [g-, g-] (rank {bracket_rank} < dim g+ = {plus_dim})")]
    PlusNotGenerated { plus_dim: usize, bracket_rank: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("malformed descriptor: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Worst residual of one identity family against its pass threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomResidual {
    pub name: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl AxiomResidual {
    pub(crate) fn new(name: &str, max_residual: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            max_residual,
            threshold,
            pass: max_residual <= threshold,
        }
    }
}
