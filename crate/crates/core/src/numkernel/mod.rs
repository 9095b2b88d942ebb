//! Dense small-matrix kernel: exponential, logarithm, solves, rank and null
//! spaces. Every approximate decision goes through a [`Tolerance`].

mod decomp;
mod expm;
mod matrix;
mod tolerance;

use thiserror::Error;

pub use decomp::{
    inverse, nullspace, operator_norm, orthonormal_span, pseudo_inverse, rank, solve, svd, Lu, Svd,
};
pub use expm::{mat_exp, mat_log, mat_sqrt};
pub use matrix::{add, axpy, dist_vec, dot, norm, scaled, sub, unit_vector, Matrix};
pub use tolerance::Tolerance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is numerically singular")]
    Singular,
    #[error("exponential overflows the scaling budget (1-norm {0:e})")]
    ExpOverflow(f64),
    #[error("spectrum outside the principal logarithm domain")]
    LogDomain,
    #[error("tolerances must be positive and finite (abs {abs_eps:e}, rel {rel_eps:e})")]
    InvalidTolerance { abs_eps: f64, rel_eps: f64 },
}
