//! Regret-optimal solvers for noisy quadratics on the unit ball.

mod allocation;
mod dependent;
mod projection;
mod search;

use alloc::vec::Vec;

pub use allocation::{allocate_energy_dependent, allocate_quadratic_search, EnergyAllocation};
pub use dependent::hessian_dependent_solve;
pub use projection::{project_to_unit_ball, project_weighted, WeightedProjection};
pub use search::{minimal_universal_budget, quadratic_search, universal_solve};

/// Intermediate quantities of the Hessian-free pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchDiagnostics {
    /// Eigenvalues actually used (after thresholding), non-increasing.
    pub eigenvalues: Vec<f64>,
    /// Number of retained eigendirections.
    pub k_star: usize,
    /// First-loop estimate `x̃ = Σ α_k ê_k`.
    pub x_tilde: Vec<f64>,
    /// `x̃` shrunk into the radius-1.5 ball; centre of the second loop.
    pub x_hat: Vec<f64>,
    /// Budget the allocation leaves untouched within `T1`.
    pub unused_budget: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub x_final: Vec<f64>,
    pub queries_used: u64,
    pub diagnostics: Option<SearchDiagnostics>,
}

/// `Σ c_k v_k` over eigen-coordinates `c` and directions `v`.
pub(crate) fn combine(coords: &[f64], directions: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut out = alloc::vec![0.0; dim];
    for (c, v) in coords.iter().zip(directions) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}
