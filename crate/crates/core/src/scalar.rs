//! Scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`], which is implemented for
//! `f32` and `f64`. Default tolerances depend on the precision of the type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Default absolute tolerance for this precision.
    const DEFAULT_ABS_EPS: f64;
    /// Default relative tolerance for this precision.
    const DEFAULT_REL_EPS: f64;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const DEFAULT_ABS_EPS: f64 = 1e-10;
    const DEFAULT_REL_EPS: f64 = 1e-9;
}

impl Real for f32 {
    const DEFAULT_ABS_EPS: f64 = 1e-4;
    const DEFAULT_REL_EPS: f64 = 1e-4;
}
