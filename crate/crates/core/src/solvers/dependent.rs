use alloc::vec::Vec;

use super::allocation::allocate_energy_dependent;
use super::projection::project_to_unit_ball;
use super::{combine, SolverReport};
use crate::error::{Error, Result};
use crate::estimators::sample_mean;
use crate::linalg::EigenDecomposition;
use crate::oracle::OracleSession;

/// Hessian-aware solver.
///
/// For every non-zero eigenpair `(λ_k, e_k)` of the true Hessian it averages
/// `t_k` queries at `±e_k` and forms the unbiased coordinate estimate
/// `α_k = −(ȳ(e_k) − ȳ(−e_k)) / (2λ_k)`, with `t_k` from
/// [`allocate_energy_dependent`]. The estimate is then projected onto the
/// unit ball in the `λ`-weighted metric. Directions with zero eigenvalue get
/// no queries and coordinate zero.
pub fn hessian_dependent_solve(
    session: &mut OracleSession,
    eig: &EigenDecomposition,
    budget: u64,
) -> Result<SolverReport> {
    let d = session.dim();
    if eig.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: eig.dim(),
        });
    }
    session.reserve(budget)?;
    let (values, vectors) = eig.positive_part()?;
    let allocation = allocate_energy_dependent(&values, budget, d)?;

    let start = session.used();
    let mut alpha = Vec::with_capacity(values.len());
    for ((&l, e), &t) in values.iter().zip(&vectors).zip(&allocation.counts) {
        let minus: Vec<f64> = e.iter().map(|v| -v).collect();
        let diff = sample_mean(session, e, t)? - sample_mean(session, &minus, t)?;
        alpha.push(-diff / (2.0 * l));
    }
    let theta = project_to_unit_ball(&values, &alpha)?;
    Ok(SolverReport {
        x_final: combine(&theta, &vectors, d),
        queries_used: session.used() - start,
        diagnostics: None,
    })
}
