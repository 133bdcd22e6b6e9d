use alloc::vec::Vec;

use super::allocation::allocate_quadratic_search;
use super::projection::project_to_unit_ball;
use super::{combine, SearchDiagnostics, SolverReport};
use crate::error::{Error, Result};
use crate::estimators::{estimate_hessian, truncated_diff};
use crate::linalg::jacobi_eigh;
use crate::math;
use crate::objective::DOMAIN_SLACK;
use crate::oracle::OracleSession;

const INTERMEDIATE_RADIUS: f64 = 1.5;

/// Two-step quadratic search on an estimated eigensystem.
///
/// First loop: `α_k = −TD(ê_k, −ê_k, t_k) / (2λ̂_k)` where `TD` is
/// [`truncated_diff`]; `x̃ = Σ α_k ê_k` is shrunk to `x̂` of norm at most
/// 1.5. Second loop re-measures around `x̂/2` with probes
/// `(±ê_k + 2x̂)/4`, giving `β_k = −4 TD(·,·, t_k) / λ̂_k`, which cancels the
/// first-order error of the estimated eigenvalues. The result is the
/// `λ̂`-weighted projection of `β` onto the unit ball.
///
/// `eigenvalues` must be positive (already thresholded) and `eigenvectors`
/// orthonormal in the session's dimension.
pub fn quadratic_search(
    session: &mut OracleSession,
    eigenvalues: &[f64],
    eigenvectors: &[Vec<f64>],
    budget: u64,
) -> Result<SolverReport> {
    let d = session.dim();
    if eigenvectors.len() != eigenvalues.len() {
        return Err(Error::DimensionMismatch {
            expected: eigenvalues.len(),
            found: eigenvectors.len(),
        });
    }
    if let Some(v) = eigenvectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.len(),
        });
    }
    session.reserve(budget)?;
    let allocation = allocate_quadratic_search(eigenvalues, budget, d)?;
    let start = session.used();

    let mut alpha = Vec::with_capacity(eigenvalues.len());
    for ((&l, e), &t) in eigenvalues.iter().zip(eigenvectors).zip(&allocation.counts) {
        let minus: Vec<f64> = e.iter().map(|v| -v).collect();
        let diff = truncated_diff(session, e, &minus, t)?.estimate;
        alpha.push(-diff / (2.0 * l));
    }
    let x_tilde = combine(&alpha, eigenvectors, d);
    let norm = math::norm2(&x_tilde);
    let shrink = if norm > INTERMEDIATE_RADIUS {
        INTERMEDIATE_RADIUS / norm
    } else {
        1.0
    };
    let x_hat: Vec<f64> = x_tilde.iter().map(|v| v * shrink).collect();

    let mut beta = Vec::with_capacity(eigenvalues.len());
    for ((&l, e), &t) in eigenvalues.iter().zip(eigenvectors).zip(&allocation.counts) {
        let plus: Vec<f64> = e.iter().zip(&x_hat).map(|(v, c)| (v + 2.0 * c) / 4.0).collect();
        let minus: Vec<f64> = e.iter().zip(&x_hat).map(|(v, c)| (-v + 2.0 * c) / 4.0).collect();
        for p in [&plus, &minus] {
            let n = math::norm2(p);
            if n > 1.0 + DOMAIN_SLACK {
                return Err(Error::OutsideDomain { norm: n });
            }
        }
        let diff = truncated_diff(session, &plus, &minus, t)?.estimate;
        beta.push(-4.0 * diff / l);
    }

    let theta = project_to_unit_ball(eigenvalues, &beta)?;
    let queries_used = session.used() - start;
    Ok(SolverReport {
        x_final: combine(&theta, eigenvectors, d),
        queries_used,
        diagnostics: Some(SearchDiagnostics {
            eigenvalues: eigenvalues.to_vec(),
            k_star: eigenvalues.len(),
            x_tilde,
            x_hat,
            unused_budget: budget - queries_used,
        }),
    })
}

fn estimation_budget(budget: u64) -> u64 {
    math::ceil(math::powf(budget as f64, 0.8)) as u64
}

fn universal_feasible(budget: u64, d: usize) -> bool {
    let t0 = estimation_budget(budget);
    let entries = (d * (d + 1) / 2) as u64;
    let search_min = 8 * d as u64 + 2;
    t0 >= 3 * entries && budget >= t0 && budget - t0 >= search_min
}

/// Smallest `T` for which [`universal_solve`] accepts dimension `d`.
pub fn minimal_universal_budget(d: usize) -> u64 {
    let mut t = 1u64;
    while !universal_feasible(t, d) {
        t += 1;
    }
    t
}

/// Hessian-free solver: spends `T0 = ⌈T^0.8⌉` queries on
/// [`estimate_hessian`], keeps the eigenpairs of `Â` with `λ̂ ≥ T^{-0.2}`, and
/// runs [`quadratic_search`] with the remaining `T − T0`. Returns the origin
/// when no eigenvalue survives the threshold.
pub fn universal_solve(session: &mut OracleSession, budget: u64) -> Result<SolverReport> {
    let d = session.dim();
    if !universal_feasible(budget, d) {
        return Err(Error::InfeasibleBudget {
            what: "universal solver",
            budget,
            minimum: minimal_universal_budget(d),
        });
    }
    session.reserve(budget)?;
    let start = session.used();
    let t0 = estimation_budget(budget);
    let hessian = estimate_hessian(session, t0, d)?;
    let eig = jacobi_eigh(&hessian)?;
    let threshold = math::powf(budget as f64, -0.2);

    let mut values = Vec::new();
    let mut vectors = Vec::new();
    for (k, &l) in eig.eigenvalues().iter().enumerate() {
        if l >= threshold {
            values.push(l);
            vectors.push(eig.eigenvector(k).to_vec());
        }
    }

    let remaining = budget - (session.used() - start);
    if values.is_empty() {
        return Ok(SolverReport {
            x_final: alloc::vec![0.0; d],
            queries_used: session.used() - start,
            diagnostics: Some(SearchDiagnostics {
                eigenvalues: values,
                k_star: 0,
                x_tilde: alloc::vec![0.0; d],
                x_hat: alloc::vec![0.0; d],
                unused_budget: remaining,
            }),
        });
    }
    let search = quadratic_search(session, &values, &vectors, budget - t0)?;
    Ok(SolverReport {
        queries_used: session.used() - start,
        ..search
    })
}
