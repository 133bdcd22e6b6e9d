use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Per-direction energy budgets `R_k` and repetition counts `t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyAllocation {
    pub energies: Vec<f64>,
    pub counts: Vec<u64>,
}

impl EnergyAllocation {
    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn check_eigenvalues(eigenvalues: &[f64]) -> Result<f64> {
    if eigenvalues.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidArgument("allocation needs finite positive eigenvalues"));
    }
    Ok(eigenvalues.iter().map(|&l| 1.0 / math::sqrt(l)).sum())
}

/// Energy allocation of the Hessian-aware algorithm:
/// `R_k = λ_k^{-1/2} / Σ_j λ_j^{-1/2} · (T − 2d − 1)` and `t_k = ⌈R_k / 2⌉`.
///
/// Two-sided sampling spends `Σ 2 t_k ≤ T − 1` queries.
pub fn allocate_energy_dependent(eigenvalues: &[f64], budget: u64, dim: usize) -> Result<EnergyAllocation> {
    let minimum = 4 * dim as u64 + 2;
    if budget < minimum {
        return Err(Error::InfeasibleBudget {
            what: "hessian-dependent allocation",
            budget,
            minimum,
        });
    }
    if eigenvalues.len() > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: eigenvalues.len(),
        });
    }
    let total = check_eigenvalues(eigenvalues)?;
    let spread = (budget - 2 * dim as u64 - 1) as f64;
    let energies: Vec<f64> = eigenvalues
        .iter()
        .map(|&l| 1.0 / math::sqrt(l) / total * spread)
        .collect();
    let counts = energies.iter().map(|&r| math::ceil(r / 2.0) as u64).collect();
    Ok(EnergyAllocation { energies, counts })
}

/// Allocation of the two-loop quadratic search:
/// `p_k = λ_k^{-1/2} / (4 Σ_j λ_j^{-1/2})` and `t_k = ⌈p_k (T1 − 4d − 1)⌉`.
/// The reported energies are `p_k (T1 − 4d − 1)`.
///
/// Both loops together spend `2 · Σ 2 t_k ≤ T1 − 1` queries.
pub fn allocate_quadratic_search(eigenvalues: &[f64], budget: u64, dim: usize) -> Result<EnergyAllocation> {
    let minimum = (4 * dim as u64 + 2).max(8 * eigenvalues.len() as u64 + 2);
    if budget < minimum {
        return Err(Error::InfeasibleBudget {
            what: "quadratic search allocation",
            budget,
            minimum,
        });
    }
    if eigenvalues.len() > dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: eigenvalues.len(),
        });
    }
    let total = check_eigenvalues(eigenvalues)?;
    let spread = (budget - 4 * dim as u64 - 1) as f64;
    let energies: Vec<f64> = eigenvalues
        .iter()
        .map(|&l| 1.0 / math::sqrt(l) / (4.0 * total) * spread)
        .collect();
    let counts = energies.iter().map(|&r| math::ceil(r) as u64).collect();
    Ok(EnergyAllocation { energies, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dependent_examples() {
        let a = allocate_energy_dependent(&[1.0, 4.0], 105, 2).unwrap();
        assert!((a.energies[0] - 200.0 / 3.0).abs() < 1e-12);
        assert!((a.energies[1] - 100.0 / 3.0).abs() < 1e-12);
        assert_eq!(a.counts, [34, 17]);
        assert_eq!(2 * a.total_count(), 102);

        let a = allocate_energy_dependent(&[1.0], 7, 1).unwrap();
        assert_eq!(a.energies, [4.0]);
        assert_eq!(a.counts, [2]);

        let a = allocate_energy_dependent(&[3.0, 3.0, 3.0], 1000, 3).unwrap();
        assert_eq!(a.energies[0], a.energies[1]);
        assert_eq!(a.energies[1], a.energies[2]);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            allocate_energy_dependent(&[1.0], 5, 1),
            Err(Error::InfeasibleBudget { minimum: 6, .. })
        ));
        assert!(allocate_energy_dependent(&[0.0], 100, 1).is_err());
        assert!(allocate_energy_dependent(&[1.0, 1.0], 100, 1).is_err());
        assert!(matches!(
            allocate_quadratic_search(&[1.0, 1.0], 17, 2),
            Err(Error::InfeasibleBudget { minimum: 18, .. })
        ));
    }

    proptest! {
        #[test]
        fn budgets_hold(
            eigs in proptest::collection::vec(1e-3f64..1e3, 1..8),
            extra in 0u64..100_000,
            pad in 0usize..3,
        ) {
            let d = eigs.len() + pad;
            let t = 8 * d as u64 + 2 + extra;
            let dep = allocate_energy_dependent(&eigs, t, d).unwrap();
            prop_assert!(2 * dep.total_count() < t);
            for (r, c) in dep.energies.iter().zip(&dep.counts) {
                prop_assert_eq!(*c, (r / 2.0).ceil() as u64);
            }
            let qs = allocate_quadratic_search(&eigs, t, d).unwrap();
            prop_assert!(4 * qs.total_count() < t);
            prop_assert!(qs.counts.iter().all(|&c| c >= 1));
        }
    }
}
