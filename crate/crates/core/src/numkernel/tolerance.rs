use serde::{Deserialize, Serialize};

use super::KernelError;
use crate::scalar::Real;

/// The single tolerance policy used for every approximate comparison.
///
/// A quantity `r` measured against a reference of size `scale` is treated as
/// zero when `r <= abs_eps + rel_eps * scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Tolerance<T: Real> {
    pub abs_eps: T,
    pub rel_eps: T,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            abs_eps: T::c(T::DEFAULT_ABS_EPS),
            rel_eps: T::c(T::DEFAULT_REL_EPS),
        }
    }
}

impl<T: Real> Tolerance<T> {
    pub fn new(abs_eps: T, rel_eps: T) -> Result<Self, KernelError> {
        if !(abs_eps > T::zero() && rel_eps > T::zero()) || !abs_eps.is_finite() || !rel_eps.is_finite() {
            return Err(KernelError::InvalidTolerance {
                abs_eps: abs_eps.as_f64(),
                rel_eps: rel_eps.as_f64(),
            });
        }
        Ok(Self { abs_eps, rel_eps })
    }

    #[inline]
    pub fn threshold(&self, scale: T) -> T {
        self.abs_eps + self.rel_eps * scale.abs()
    }

    #[inline]
    pub fn is_zero(&self, residual: T, scale: T) -> bool {
        residual.abs() <= self.threshold(scale)
    }

    /// Square-root tolerance for checks that go through finite differences or
    /// truncated limits, where only about half the digits survive.
    pub fn loose(&self) -> Self {
        Self {
            abs_eps: self.abs_eps.sqrt(),
            rel_eps: self.rel_eps.sqrt(),
        }
    }

    /// Scales both components by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            abs_eps: self.abs_eps * factor,
            rel_eps: self.rel_eps * factor,
        }
    }
}
