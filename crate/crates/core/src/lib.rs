//! Symmetric spaces of matrix symmetric pairs: Lie triple systems, the
//! reflection product on `G/K`, exponential maps and Trotter approximants,
//! reflection and integral subspaces, and quotients by ideals.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix `f64` (and `f32` where it is commonly needed).

pub mod catalog;
pub mod lts;
pub mod numkernel;
pub mod quotient;
pub mod scalar;
pub mod subspace;
pub mod sympair;
pub mod symspace;
pub mod verify;

pub use scalar::Real;

pub type Mat64 = numkernel::Matrix<f64>;
pub type Mat32 = numkernel::Matrix<f32>;
pub type Tol64 = numkernel::Tolerance<f64>;
pub type Tol32 = numkernel::Tolerance<f32>;
pub type Lts64 = lts::LieTripleSystem<f64>;
pub type Lts32 = lts::LieTripleSystem<f32>;
pub type Subspace64 = lts::LinearSubspace<f64>;
pub type Pair64 = sympair::MatrixSymmetricPair<f64>;
pub type Pair32 = sympair::MatrixSymmetricPair<f32>;
pub type Space64 = symspace::SymmetricSpace<f64>;
pub type Space32 = symspace::SymmetricSpace<f32>;
pub type Point64 = symspace::SymPoint<f64>;
pub type Model64 = catalog::ModelDescriptor<f64>;
