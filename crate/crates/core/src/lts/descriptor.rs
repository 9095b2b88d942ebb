//! JSON descriptors.
//!
//! LTS: `{"dim": d, "tensor": c[i][j][k][l], "labels": [...], "label": "..."}`.
//! Symmetric Lie algebra: `{"dim": d, "tensor": b[i][j][l], "theta": [[..]],
//! "plus_basis": [[..]], "minus_basis": [[..]], "labels": [...], "label": "..."}`;
//! the eigenbases are recomputed from `theta` on load.

use serde::{Deserialize, Serialize};

use super::{LieTripleSystem, LtsError, SymmetricLieAlgebra};
use crate::numkernel::{Matrix, Tolerance};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LtsDescriptor<T: Real> {
    pub dim: usize,
    pub tensor: Vec<Vec<Vec<Vec<T>>>>,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AlgebraDescriptor<T: Real> {
    pub dim: usize,
    pub tensor: Vec<Vec<Vec<T>>>,
    pub theta: Matrix<T>,
    #[serde(default)]
    pub plus_basis: Vec<Vec<T>>,
    #[serde(default)]
    pub minus_basis: Vec<Vec<T>>,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub label: String,
}

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl<T: Real> LieTripleSystem<T> {
    pub fn to_descriptor(&self) -> LtsDescriptor<T> {
        let d = self.dim();
        let tensor = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.basis_bracket(i, j, k).to_vec()).collect())
                    .collect()
            })
            .collect();
        LtsDescriptor {
            dim: d,
            tensor,
            labels: default_labels("e", d),
            label: self.label().to_string(),
        }
    }

    /// Shape-checked load; the axioms are not enforced here.
    pub fn from_descriptor(desc: &LtsDescriptor<T>) -> Result<Self, LtsError> {
        let d = desc.dim;
        let bad = || LtsError::Descriptor(format!("tensor must have shape {d}x{d}x{d}x{d}"));
        if desc.tensor.len() != d {
            return Err(bad());
        }
        let mut flat = Vec::with_capacity(d.pow(4));
        for a in &desc.tensor {
            if a.len() != d {
                return Err(bad());
            }
            for b in a {
                if b.len() != d {
                    return Err(bad());
                }
                for c in b {
                    if c.len() != d {
                        return Err(bad());
                    }
                    flat.extend_from_slice(c);
                }
            }
        }
        LieTripleSystem::new(d, flat, desc.label.clone())
    }
}

impl<T: Real> SymmetricLieAlgebra<T> {
    pub fn to_descriptor(&self) -> AlgebraDescriptor<T> {
        let d = self.dim();
        AlgebraDescriptor {
            dim: d,
            tensor: (0..d)
                .map(|i| (0..d).map(|j| self.basis_bracket(i, j).to_vec()).collect())
                .collect(),
            theta: self.theta().clone(),
            plus_basis: self.plus().basis().to_vec(),
            minus_basis: self.minus().basis().to_vec(),
            labels: default_labels("g", d),
            label: self.label().to_string(),
        }
    }

    pub fn from_descriptor(desc: &AlgebraDescriptor<T>, tol: &Tolerance<T>) -> Result<Self, LtsError> {
        let d = desc.dim;
        let ok = desc.tensor.len() == d
            && desc.tensor.iter().all(|a| a.len() == d && a.iter().all(|b| b.len() == d));
        if !ok {
            return Err(LtsError::Descriptor(format!("tensor must have shape {d}x{d}x{d}")));
        }
        let flat: Vec<T> = desc.tensor.iter().flatten().flatten().copied().collect();
        SymmetricLieAlgebra::new(d, flat, desc.theta.clone(), desc.label.clone(), tol)
    }
}
