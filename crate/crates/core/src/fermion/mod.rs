//! Fermion operators on a fixed gauge background: the single-component
//! hopping operator, a naive Dirac operator in two and four dimensions,
//! dense determinants and Krylov propagators.

mod dense;
mod gamma;
mod operators;
mod solver;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

pub use dense::{determinant, Determinant, LuDecomposition, DENSE_BUDGET};
pub use gamma::{gamma_matrices, GammaMatrices, SpinMatrix};
pub use operators::{dirac_operator, hopping_operator, DiracOperator, HoppingOperator};
pub use solver::{bicgstab, propagator, SolveOptions, Solution, SolveMethod};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FermionError {
    #[error("the Dirac operator supports 2 or 4 dimensions, got {0}")]
    UnsupportedDimension(usize),
    #[error("gamma matrices violate the Clifford algebra by {0:e}")]
    CliffordViolation(f64),
    #[error("invalid fermion parameters: {0}")]
    InvalidParams(String),
    #[error("matrix dimension {dim} exceeds the dense budget of {budget}")]
    OverBudget { dim: usize, budget: usize },
    #[error("operator is singular or nearly so (pivot-ratio condition estimate {condition_estimate:e})")]
    Singular { condition_estimate: f64 },
    #[error("solver stopped at relative residual {residual:e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("source index {index} outside operator dimension {dim}")]
    SourceOutOfRange { index: usize, dim: usize },
}

/// Mass, hopping amplitude and temporal boundary condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermionParams<T> {
    pub mass: T,
    pub hopping: T,
    /// Antiperiodic boundary in the time direction (last lattice axis).
    pub temporal_antiperiodic: bool,
}

impl<T: Real> FermionParams<T> {
    pub fn new(mass: T, hopping: T, temporal_antiperiodic: bool) -> Self {
        Self {
            mass,
            hopping,
            temporal_antiperiodic,
        }
    }

    /// Both parameters finite. `t = 0` is allowed and gives the static limit.
    pub fn validate(&self) -> Result<(), FermionError> {
        if !self.mass.is_finite() || !self.hopping.is_finite() {
            return Err(FermionError::InvalidParams(format!(
                "mass {} and hopping {} must be finite",
                self.mass, self.hopping
            )));
        }
        Ok(())
    }
}
