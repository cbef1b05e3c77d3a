use serde::{Deserialize, Serialize};

use super::HybridError;

/// Ratios of a target lattice to a reference one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostQuery {
    /// Linear extent ratio.
    pub lattice_size: f64,
    /// Lattice spacing ratio.
    pub lattice_spacing: f64,
}

/// Relative CPU time of a dynamical-fermion simulation, `size⁵ · spacing⁻⁷`.
pub fn cost_estimate(q: &CostQuery) -> Result<f64, HybridError> {
    if !(q.lattice_size > 0.0 && q.lattice_spacing > 0.0) || !q.lattice_size.is_finite() || !q.lattice_spacing.is_finite() {
        return Err(HybridError::InvalidCost {
            size: q.lattice_size,
            spacing: q.lattice_spacing,
        });
    }
    Ok(q.lattice_size.powi(5) * q.lattice_spacing.powi(-7))
}
