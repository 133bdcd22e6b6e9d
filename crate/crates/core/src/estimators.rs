//! Averaging and truncation-based estimators.
//!
//! The truncation method clamps every raw measurement to `[-m, m]` before
//! averaging. With only a finite-variance assumption on the noise this
//! yields sub-exponential tails for the average, at the price of a bias
//! bounded by [`truncation_mean_shift_bound`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::math;
use crate::oracle::OracleSession;

/// Outcome of a [`truncated_diff`] call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationReport {
    /// Number of clamped pairs averaged.
    pub raw_count: u64,
    /// Clamp level `m`.
    pub clamp_level: f64,
    /// Fraction of pairs whose raw difference fell outside `[-m, m]`.
    pub clamped_fraction: f64,
    pub estimate: f64,
}

#[inline]
pub fn clamp(value: f64, level: f64) -> f64 {
    value.max(-level).min(level)
}

/// Mean of `t` fresh queries at `x`. Consumes exactly `t` budget.
pub fn sample_mean(session: &mut OracleSession, x: &[f64], t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::InvalidArgument("sample_mean needs t >= 1"));
    }
    session.reserve(t)?;
    let mut sum = 0.0;
    for _ in 0..t {
        sum += session.query(x)?;
    }
    Ok(sum / t as f64)
}

/// `⌈2 ε⁻² ln(1/δ)⌉`: repetitions after which the mean of a 1-sub-Gaussian
/// variable is ε-accurate with probability `1 − δ`. At least one sample is
/// always taken.
pub fn sample_count_pac(eps: f64, delta: f64) -> Result<u64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument("accuracy must be positive"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument("failure probability must lie in (0, 1)"));
    }
    let n = math::ceil(2.0 / (eps * eps) * math::ln(1.0 / delta));
    if !(n < u64::MAX as f64) {
        return Err(Error::InvalidArgument("sample count overflows"));
    }
    Ok((n as u64).max(1))
}

/// Draws `t` pairs `(y₊, y₋)` at `x_plus` and `x_minus`, clamps each
/// difference to `[-√t, √t]` and returns their mean. Consumes exactly `2t`
/// budget.
pub fn truncated_diff(
    session: &mut OracleSession,
    x_plus: &[f64],
    x_minus: &[f64],
    t: u64,
) -> Result<TruncationReport> {
    if t == 0 {
        return Err(Error::InvalidArgument("truncated_diff needs t >= 1"));
    }
    let needed = t
        .checked_mul(2)
        .ok_or(Error::InvalidArgument("repetition count overflows"))?;
    session.reserve(needed)?;
    let level = math::sqrt(t as f64);
    let mut sum = 0.0;
    let mut clamped = 0u64;
    for _ in 0..t {
        let y_plus = session.query(x_plus)?;
        let y_minus = session.query(x_minus)?;
        let diff = y_plus - y_minus;
        if diff.abs() > level {
            clamped += 1;
        }
        sum += clamp(diff, level);
    }
    Ok(TruncationReport {
        raw_count: t,
        clamp_level: level,
        clamped_fraction: clamped as f64 / t as f64,
        estimate: sum / t as f64,
    })
}

/// Bias introduced by clamping at `m`: `|E[clamp(X)] − E[X]| ≤ ¼ Var[X] / (m − |E[X]|)`.
pub fn truncation_mean_shift_bound(variance: f64, abs_mean: f64, m: f64) -> Result<f64> {
    if !(variance >= 0.0) || !(abs_mean >= 0.0) {
        return Err(Error::InvalidArgument("variance and |mean| must be non-negative"));
    }
    if !(m > abs_mean) {
        return Err(Error::InvalidArgument("clamp level must exceed |mean|"));
    }
    Ok(0.25 * variance / (m - abs_mean))
}

/// Tail bound for a sum of independent clamped variables:
/// `P[|Σ clamp(X_k) − Σ E[X_k]| ≥ z] ≤ min(1, 2 exp(Σ Var_k / (m (m − |E_k|)) − z/m))`.
pub fn truncation_tail_bound(variances: &[f64], abs_means: &[f64], m: f64, z: f64) -> Result<f64> {
    if variances.len() != abs_means.len() {
        return Err(Error::DimensionMismatch {
            expected: variances.len(),
            found: abs_means.len(),
        });
    }
    if !(z > 0.0) {
        return Err(Error::InvalidArgument("deviation z must be positive"));
    }
    let mut exponent = 0.0;
    for (&var, &mean) in variances.iter().zip(abs_means) {
        if !(var >= 0.0) || !(mean >= 0.0) {
            return Err(Error::InvalidArgument("variance and |mean| must be non-negative"));
        }
        if !(m > mean) {
            return Err(Error::InvalidArgument("clamp level must exceed every |mean|"));
        }
        exponent += var / (m * (m - mean));
    }
    exponent -= z / m;
    Ok((2.0 * math::exp(exponent)).min(1.0))
}

/// Estimates the Hessian from second differences on predetermined points.
///
/// Diagonal entry `(i, i)` averages `y(e_i) + y(−e_i) − 2 y(0)`; off-diagonal
/// `(i, j)` averages `y(u) + y(−u) − 2 y(0)` with `u = (e_i + e_j)/√2`, whose
/// mean `uᵀAu = ½(A_ii + A_jj) + A_ij` is then solved for `A_ij`. The budget
/// `t0` is split equally over the `d(d+1)/2` entries (remainder unused) and
/// every triplet sum is clamped at the square root of the per-entry repetition
/// count. Exactness without noise therefore needs that level to exceed the
/// largest triplet sum.
pub fn estimate_hessian(session: &mut OracleSession, t0: u64, d: usize) -> Result<SymmetricMatrix> {
    if d != session.dim() {
        return Err(Error::DimensionMismatch {
            expected: session.dim(),
            found: d,
        });
    }
    let entries = (d * (d + 1) / 2) as u64;
    let minimum = 3 * entries;
    if t0 < minimum {
        return Err(Error::InfeasibleBudget {
            what: "hessian estimation",
            budget: t0,
            minimum,
        });
    }
    session.reserve(t0)?;

    let per_entry = t0 / entries;
    let reps = per_entry / 3;
    let level = math::sqrt(reps as f64);
    let origin = vec![0.0; d];

    let probe_mean = |session: &mut OracleSession, u: &[f64]| -> Result<f64> {
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        let mut sum = 0.0;
        for _ in 0..reps {
            let s = session.query(u)? + session.query(&neg)? - 2.0 * session.query(&origin)?;
            sum += clamp(s, level);
        }
        Ok(sum / reps as f64)
    };

    let mut hessian = SymmetricMatrix::zeros(d)?;
    let mut probe = vec![0.0; d];
    for i in 0..d {
        probe.iter_mut().for_each(|v| *v = 0.0);
        probe[i] = 1.0;
        let a_ii = probe_mean(session, &probe)?;
        hessian.set(i, i, a_ii);
    }
    let r = core::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            probe.iter_mut().for_each(|v| *v = 0.0);
            probe[i] = r;
            probe[j] = r;
            let curvature = probe_mean(session, &probe)?;
            let a_ij = curvature - 0.5 * (hessian.get(i, i) + hessian.get(j, j));
            hessian.set(i, j, a_ij);
        }
    }
    Ok(hessian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseModel;
    use crate::objective::QuadraticObjective;
    use alloc::vec;

    fn session(a: SymmetricMatrix, x0: Vec<f64>, noise: NoiseModel, budget: u64, seed: u64) -> OracleSession {
        OracleSession::new(QuadraticObjective::new(a, x0).unwrap(), noise, budget, seed).unwrap()
    }

    #[test]
    fn sample_mean_examples() {
        let a = SymmetricMatrix::diagonal(&[2.0, 1.0]).unwrap();
        let mut s = session(a, vec![0.1, 0.2], NoiseModel::Zero, 100, 0);
        let x = [0.5, -0.5];
        // f = ½(2·0.16 + 0.49) = 0.405
        assert!((sample_mean(&mut s, &x, 7).unwrap() - 0.405).abs() < 1e-15);
        assert_eq!(s.used(), 7);
        assert!(sample_mean(&mut s, &x, 0).is_err());
        assert!(matches!(
            sample_mean(&mut s, &x, 94),
            Err(Error::BudgetExhausted { .. })
        ));
        assert_eq!(s.used(), 7);
    }

    #[test]
    fn sample_mean_concentrates() {
        let a = SymmetricMatrix::diagonal(&[2.0]).unwrap();
        let mut s = session(a, vec![0.0], NoiseModel::Gaussian, 10_000, 5);
        let m = sample_mean(&mut s, &[0.5], 10_000).unwrap();
        // sd of the mean is 0.01, so 0.05 is five sigma
        assert!((m - 0.25).abs() < 0.05);
    }

    #[test]
    fn pac_counts() {
        assert_eq!(sample_count_pac(0.5, 0.1).unwrap(), 19);
        assert_eq!(sample_count_pac(1.0, (-1.0f64).exp()).unwrap(), 2);
        assert_eq!(sample_count_pac(2f64.sqrt(), (-1.0f64).exp()).unwrap(), 1);
        assert!(sample_count_pac(0.0, 0.1).is_err());
        assert!(sample_count_pac(0.1, 1.0).is_err());
        assert!(sample_count_pac(0.1, 0.0).is_err());
    }

    #[test]
    fn truncated_diff_exact_when_unclamped() {
        let a = SymmetricMatrix::diagonal(&[2.0]).unwrap();
        let mut s = session(a, vec![0.0], NoiseModel::Zero, 100, 0);
        let r = truncated_diff(&mut s, &[1.0], &[0.5], 9).unwrap();
        assert_eq!(r.estimate, 1.0 - 0.25);
        assert_eq!(r.clamped_fraction, 0.0);
        assert_eq!(r.clamp_level, 3.0);
        assert_eq!(s.used(), 18);
    }

    #[test]
    fn truncated_diff_clamps_deterministically() {
        // A = 10, x0 = -0.5: f(1) = 11.25, f(-1) = 1.25, difference 10
        let a = SymmetricMatrix::diagonal(&[10.0]).unwrap();
        let mut s = session(a, vec![-0.5], NoiseModel::Zero, 8, 0);
        let r = truncated_diff(&mut s, &[1.0], &[-1.0], 4).unwrap();
        assert_eq!(r.estimate, 2.0);
        assert_eq!(r.clamped_fraction, 1.0);
        assert_eq!(s.used(), 8);
        assert!(truncated_diff(&mut s, &[1.0], &[-1.0], 1).is_err());
    }

    #[test]
    fn truncated_diff_gaussian_accuracy() {
        // f(x) = ½x², x0 = 0: f(0.9) - f(sqrt(0.21)) = 0.405 - 0.105 = 0.3
        let a = SymmetricMatrix::diagonal(&[1.0]).unwrap();
        let mut s = session(a, vec![0.0], NoiseModel::Gaussian, 20_000, 17);
        let r = truncated_diff(&mut s, &[0.9], &[0.21f64.sqrt()], 10_000).unwrap();
        assert!((r.estimate - 0.3).abs() < 0.1);
        assert!(r.estimate.abs() <= r.clamp_level);
    }

    #[test]
    fn mean_shift_bound_examples() {
        assert!((truncation_mean_shift_bound(1.0, 0.0, 10.0).unwrap() - 0.025).abs() < 1e-15);
        assert_eq!(truncation_mean_shift_bound(0.0, 0.3, 1.0).unwrap(), 0.0);
        assert_eq!(truncation_mean_shift_bound(4.0, 1.0, 3.0).unwrap(), 0.5);
        assert!(truncation_mean_shift_bound(1.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn tail_bound_examples() {
        let vars = vec![1.0; 100];
        let means = vec![0.0; 100];
        let b = truncation_tail_bound(&vars, &means, 10.0, 30.0).unwrap();
        assert!((b - 2.0 * (-2.0f64).exp()).abs() < 1e-12);
        assert!((b - 0.27067).abs() < 1e-5);
        let tiny = truncation_tail_bound(&vars, &means, 10.0, 7000.0).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-300);
        assert_eq!(truncation_tail_bound(&[1.0], &[0.0], 1.0, 1.0).unwrap(), 1.0);
        assert!(truncation_tail_bound(&[1.0], &[1.0], 1.0, 1.0).is_err());
        assert!(truncation_tail_bound(&[1.0], &[], 1.0, 1.0).is_err());
    }

    #[test]
    fn hessian_one_dimensional_exact() {
        let a = SymmetricMatrix::diagonal(&[2.0]).unwrap();
        let mut s = session(a.clone(), vec![0.0], NoiseModel::Zero, 12, 0);
        let h = estimate_hessian(&mut s, 12, 1).unwrap();
        assert_eq!(h.get(0, 0), 2.0);

        // one repetition clamps the triplet sum 2 at level 1
        let mut s = session(a, vec![0.0], NoiseModel::Zero, 3, 0);
        assert_eq!(estimate_hessian(&mut s, 3, 1).unwrap().get(0, 0), 1.0);
    }

    #[test]
    fn hessian_two_dimensional_exact() {
        let a = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let mut s = session(a.clone(), vec![0.0, 0.0], NoiseModel::Zero, 90, 0);
        let h = estimate_hessian(&mut s, 90, 2).unwrap();
        assert!(h.distance(&a).unwrap() < 1e-12);
        assert_eq!(s.used(), 90);
    }

    #[test]
    fn hessian_budget_guards() {
        let a = SymmetricMatrix::identity(3).unwrap();
        let mut s = session(a, vec![0.0; 3], NoiseModel::Zero, 100, 0);
        assert!(matches!(
            estimate_hessian(&mut s, 17, 3),
            Err(Error::InfeasibleBudget { minimum: 18, .. })
        ));
        assert!(matches!(
            estimate_hessian(&mut s, 101, 3),
            Err(Error::BudgetExhausted { .. })
        ));
        // 6 entries × 3 queries; 20 leaves a remainder of 2 unused
        estimate_hessian(&mut s, 20, 3).unwrap();
        assert_eq!(s.used(), 18);
    }
}
