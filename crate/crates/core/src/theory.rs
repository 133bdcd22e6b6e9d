//! Closed-form regret predictors and the lower-bound hard instances.
//!
//! Functions here take eigenvalues in **ascending** order (smallest first),
//! the natural order for the effective-dimension cutoff `k*`. Solvers use
//! the non-increasing order of [`EigenDecomposition`]; convert with
//! [`ascending`].

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::EigenDecomposition;
use crate::math;

/// A minimizer from the hard set: coordinate `k` (in the eigenbasis) has
/// magnitude `√(λ_k^{-3/2} · Σ_j λ_j^{-1/2} / (2T))` and the given sign.
///
/// The magnitudes make the wrong-sign penalty `λ_k x_k²` proportional to
/// the energy `1/(λ_k² x_k²)` needed to learn the sign, with the same ratio
/// `λ_k³ x_k⁴ = (Σ λ^{-1/2})² / (4T²)` on every coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct HardInstance {
    /// Coordinates in the eigenbasis the eigenvalues were given in.
    pub minimizer: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub signs: Vec<i8>,
}

impl HardInstance {
    /// Maps the eigen-coordinates into the ambient space of `eig`, whose
    /// eigenvalue order must match the order used to build the instance.
    pub fn minimizer_in_basis(&self, eig: &EigenDecomposition) -> Result<Vec<f64>> {
        if eig.dim() < self.minimizer.len() {
            return Err(Error::DimensionMismatch {
                expected: self.minimizer.len(),
                found: eig.dim(),
            });
        }
        let mut x = alloc::vec![0.0; eig.dim()];
        for (k, &c) in self.minimizer.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(eig.eigenvector(k)) {
                *xi += c * vi;
            }
        }
        Ok(x)
    }
}

/// Regret prediction at budget `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretPrediction {
    pub k_star: usize,
    /// Asymptotic constant `½ (Σ λ^{-1/2})²` of the tight `1/T` rate.
    pub leading_constant: f64,
    /// Order-level prediction (no hidden constant).
    pub predicted_regret: f64,
}

/// Eigenvalues sorted ascending.
pub fn ascending(eigenvalues: &[f64]) -> Vec<f64> {
    let mut v = eigenvalues.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn inv_sqrt_sums(eigenvalues: &[f64]) -> Result<(f64, f64)> {
    let mut s = 0.0;
    let mut q = 0.0;
    for &l in eigenvalues {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidArgument("eigenvalues must be finite and positive"));
        }
        let r = 1.0 / math::sqrt(l);
        s += r;
        q += r * r * r;
    }
    Ok((s, q))
}

/// Smallest `T` at which the hard instance fits in the unit ball:
/// `⌈Σ λ^{-1/2} · Σ λ^{-3/2} / 2⌉`.
pub fn hard_instance_min_budget(eigenvalues: &[f64]) -> Result<u64> {
    let (s, q) = inv_sqrt_sums(eigenvalues)?;
    Ok(math::ceil(s * q / 2.0) as u64)
}

pub fn hard_instance(eigenvalues: &[f64], budget: u64, signs: &[i8]) -> Result<HardInstance> {
    if signs.len() != eigenvalues.len() {
        return Err(Error::DimensionMismatch {
            expected: eigenvalues.len(),
            found: signs.len(),
        });
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidArgument("signs must be +1 or -1"));
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive"));
    }
    let (s, _) = inv_sqrt_sums(eigenvalues)?;
    let magnitudes: Vec<f64> = eigenvalues
        .iter()
        .map(|&l| math::sqrt(math::powf(l, -1.5) * s / (2.0 * budget as f64)))
        .collect();
    let norm = math::norm2(&magnitudes);
    if norm > 1.0 {
        return Err(Error::InfeasibleInstance {
            budget,
            norm,
            minimum: hard_instance_min_budget(eigenvalues)?,
        });
    }
    let minimizer = magnitudes
        .iter()
        .zip(signs)
        .map(|(&m, &s)| m * f64::from(s))
        .collect();
    Ok(HardInstance {
        minimizer,
        magnitudes,
        signs: signs.to_vec(),
    })
}

/// Independent fair signs, one per coordinate.
pub fn random_signs<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<i8> {
    (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()
}

/// Effective dimension: the largest `k ∈ {0, …, n}` with
/// `T ≥ (Σ_{j≤k} λ_j^{-1/2}) · (Σ_{j≤k} λ_j^{-3/2})` for ascending `λ`.
///
/// The product is non-decreasing in `k`, so the scan stops at the first
/// violation.
pub fn k_star(eigenvalues: &[f64], budget: f64) -> usize {
    let mut s = 0.0;
    let mut q = 0.0;
    let mut k = 0;
    for &l in eigenvalues {
        let r = 1.0 / math::sqrt(l);
        s += r;
        q += r * r * r;
        if budget >= s * q {
            k += 1;
        } else {
            break;
        }
    }
    k
}

/// Order-level regret `(Σ_{k≤k*} λ_k^{-1/2})²/T + λ_{k*+1}` (last term
/// dropped when `k* = n`), for ascending eigenvalues.
pub fn predicted_regret(eigenvalues: &[f64], budget: u64) -> Result<RegretPrediction> {
    let n = eigenvalues.len();
    if budget <= 3 * n as u64 {
        return Err(Error::InfeasibleBudget {
            what: "regret prediction",
            budget,
            minimum: 3 * n as u64 + 1,
        });
    }
    if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("eigenvalues must be sorted ascending"));
    }
    let (total, _) = inv_sqrt_sums(eigenvalues)?;
    let t = budget as f64;
    let k = k_star(eigenvalues, t);
    let head: f64 = eigenvalues[..k].iter().map(|&l| 1.0 / math::sqrt(l)).sum();
    let mut predicted = head * head / t;
    if k < n {
        predicted += eigenvalues[k];
    }
    Ok(RegretPrediction {
        k_star: k,
        leading_constant: 0.5 * total * total,
        predicted_regret: predicted,
    })
}

/// Bayes regret floor `(Σ λ^{-1/2})² / (8T)` certified by the hard
/// instances under Gaussian noise.
pub fn lower_bound_witness(eigenvalues: &[f64], budget: u64) -> Result<f64> {
    let signs = alloc::vec![1; eigenvalues.len()];
    hard_instance(eigenvalues, budget, &signs)?;
    let (s, _) = inv_sqrt_sums(eigenvalues)?;
    Ok(s * s / (8.0 * budget as f64))
}
