//! The budgeted noisy query interface every solver consumes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math;
use crate::noise::{NoiseModel, NoiseSampler};
use crate::objective::{QuadraticObjective, DOMAIN_SLACK};

/// One replication's oracle: returns `f(x) + w` for `‖x‖₂ ≤ 1`, at most
/// `budget` times. Noise comes from a single ChaCha8 stream seeded with
/// `seed` and advanced only by [`query`](Self::query).
#[derive(Debug, Clone)]
pub struct OracleSession {
    objective: QuadraticObjective,
    noise: NoiseModel,
    sampler: NoiseSampler,
    budget: u64,
    used: u64,
    seed: u64,
    rng: ChaCha8Rng,
}

impl OracleSession {
    pub fn new(objective: QuadraticObjective, noise: NoiseModel, budget: u64, seed: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::InvalidArgument("oracle budget must be positive"));
        }
        let sampler = noise.sampler()?;
        Ok(Self {
            objective,
            noise,
            sampler,
            budget,
            used: 0,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.used
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fails with [`Error::BudgetExhausted`] unless `n` more queries fit.
    pub fn reserve(&self, n: u64) -> Result<()> {
        if n > self.remaining() {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        Ok(())
    }

    pub fn query(&mut self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        if self.used >= self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        let norm = math::norm2(x);
        // negated comparison so NaN is rejected too
        if !(norm <= 1.0 + DOMAIN_SLACK) {
            return Err(Error::OutsideDomain { norm });
        }
        self.used += 1;
        let value = self.objective.evaluate_unchecked(x);
        if self.sampler.is_zero() {
            return Ok(value);
        }
        Ok(value + self.sampler.sample(&mut self.rng))
    }
}
