use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

const NORM_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 400;

/// Minimizer of `Σ λ_k (α_k − θ_k)²` over `‖θ‖₂ ≤ 1`, with its multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedProjection {
    pub theta: Vec<f64>,
    /// Lagrange multiplier `μ ≥ 0` of the ball constraint.
    pub multiplier: f64,
}

fn shrink(weights: &[f64], alpha: &[f64], mu: f64, out: &mut [f64]) -> f64 {
    let mut sq = 0.0;
    for ((o, &l), &a) in out.iter_mut().zip(weights).zip(alpha) {
        *o = if l > 0.0 { l * a / (l + mu) } else { 0.0 };
        sq += *o * *o;
    }
    math::sqrt(sq)
}

/// Projects eigen-coordinates `alpha` onto the unit ball in the metric
/// weighted by `weights`.
///
/// Stationarity gives `θ_k = λ_k α_k / (λ_k + μ)`. When the unconstrained
/// point already fits, `μ = 0`; otherwise `‖θ(μ)‖` is strictly decreasing in
/// `μ` and the root of `‖θ(μ)‖ = 1` is bracketed and bisected. The returned
/// point comes from the feasible side of the bracket. Coordinates with zero
/// weight are unidentifiable and set to zero.
pub fn project_weighted(weights: &[f64], alpha: &[f64]) -> Result<WeightedProjection> {
    if weights.len() != alpha.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            found: alpha.len(),
        });
    }
    if weights.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
        return Err(Error::InvalidArgument("projection weights must be finite and non-negative"));
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidArgument("projection target must be finite"));
    }

    let mut theta = alloc::vec![0.0; alpha.len()];
    if shrink(weights, alpha, 0.0, &mut theta) <= 1.0 {
        return Ok(WeightedProjection {
            theta,
            multiplier: 0.0,
        });
    }

    // ‖θ(μ)‖ ≤ Σ λ|α| / μ, so μ = max(Σ λ|α|, smallest weight scale) is a valid start.
    let mut hi: f64 = weights
        .iter()
        .zip(alpha)
        .map(|(l, a)| l * a.abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    while shrink(weights, alpha, hi, &mut theta) > 1.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let norm = shrink(weights, alpha, mid, &mut theta);
        if norm > 1.0 {
            lo = mid;
        } else {
            hi = mid;
            if 1.0 - norm <= NORM_TOL {
                break;
            }
        }
    }
    shrink(weights, alpha, hi, &mut theta);
    Ok(WeightedProjection {
        theta,
        multiplier: hi,
    })
}

/// [`project_weighted`] returning only the projected coordinates.
pub fn project_to_unit_ball(weights: &[f64], alpha: &[f64]) -> Result<Vec<f64>> {
    project_weighted(weights, alpha).map(|p| p.theta)
}
