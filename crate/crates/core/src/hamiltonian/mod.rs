//! Truncated Kogut–Susskind Hamiltonian for compact U(1) on small periodic
//! 2D lattices, in temporal gauge.
//!
//! Each spatial link carries an integer electric field `E_l ∈ [−Λ, Λ]`. The
//! link operator `U_l` raises `E_l` by one and annihilates states that
//! would leave the cutoff, so `[E_l, U_l] = U_l` holds exactly on the
//! truncated space. Gauss-law generators are the lattice divergences of `E`.

mod basis;
mod operators;

use thiserror::Error;

use crate::eigen::EigenError;

pub use basis::{build_basis, divergence, GaugeBasis, Sector};
pub use operators::{
    build_hamiltonian, electric_operator, gauss_generator, ground_state, link_raising_operator, plaquette_operator,
    plaquette_shifts, write_spectrum_csv, ChargeRestricted, HamiltonianOperator,
};

/// Default cap on the number of basis states.
pub const DEFAULT_BUDGET: usize = 8_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("the Hamiltonian needs a two-dimensional lattice, got {0} dimensions")]
    NotTwoDimensional(usize),
    #[error("electric cutoff must be at least 1, got {0}")]
    CutoffTooSmall(u32),
    #[error("basis dimension {dimension} exceeds the budget of {budget} states")]
    BudgetExceeded { dimension: u128, budget: usize },
    #[error("expected {expected} site charges, got {got}")]
    ChargeCount { expected: usize, got: usize },
    #[error("coupling g² must be positive and finite, got {0}")]
    NonPositiveCoupling(f64),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}
