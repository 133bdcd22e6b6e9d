use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::math;

/// Slack allowed on the unit-ball constraint to absorb rounding.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// `f(x) = ½ (x − x0)ᵀ A (x − x0)` with `‖x0‖₂ ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    hessian: SymmetricMatrix,
    minimizer: Vec<f64>,
}

impl QuadraticObjective {
    pub fn new(hessian: SymmetricMatrix, minimizer: Vec<f64>) -> Result<Self> {
        if minimizer.len() != hessian.dim() {
            return Err(Error::DimensionMismatch {
                expected: hessian.dim(),
                found: minimizer.len(),
            });
        }
        let norm = math::norm2(&minimizer);
        if norm > 1.0 + DOMAIN_SLACK {
            return Err(Error::OutsideDomain { norm });
        }
        Ok(Self { hessian, minimizer })
    }

    pub fn dim(&self) -> usize {
        self.hessian.dim()
    }

    pub fn hessian(&self) -> &SymmetricMatrix {
        &self.hessian
    }

    pub fn minimizer(&self) -> &[f64] {
        &self.minimizer
    }

    /// Exact objective value. This is ground truth for measuring regret;
    /// solvers only see it through an [`OracleSession`](crate::OracleSession).
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> f64 {
        let d = self.dim();
        let a = self.hessian.as_row_major();
        let mut acc = 0.0;
        for i in 0..d {
            let di = x[i] - self.minimizer[i];
            let mut row = 0.0;
            for j in 0..d {
                row += a[i * d + j] * (x[j] - self.minimizer[j]);
            }
            acc += di * row;
        }
        0.5 * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn evaluate_examples() {
        let f = QuadraticObjective::new(SymmetricMatrix::diagonal(&[2.0]).unwrap(), vec![0.0]).unwrap();
        assert_eq!(f.evaluate(&[1.0]).unwrap(), 1.0);
        assert_eq!(f.evaluate(&[0.0]).unwrap(), 0.0);

        let a = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let f = QuadraticObjective::new(a.clone(), vec![0.0, 0.0]).unwrap();
        assert_eq!(f.evaluate(&[1.0, 1.0]).unwrap(), 3.0);

        let f = QuadraticObjective::new(a, vec![0.6, -0.3]).unwrap();
        assert_eq!(f.evaluate(&[0.6, -0.3]).unwrap(), 0.0);
        assert!(f.evaluate(&[1.0]).is_err());
    }

    #[test]
    fn minimizer_must_lie_in_ball() {
        let a = SymmetricMatrix::identity(2).unwrap();
        assert!(matches!(
            QuadraticObjective::new(a.clone(), vec![1.0, 1.0]),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(QuadraticObjective::new(a, vec![1.0]).is_err());
    }
}
