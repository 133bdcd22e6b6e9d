//! Additive observation noise. Every model has mean zero and variance at
//! most one.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Noiseless observations.
    Zero,
    /// Standard normal.
    Gaussian,
    /// ±1 with equal probability.
    Rademacher,
    /// Uniform on `[-√3, √3]`.
    Uniform,
    /// Student-t with `dof > 2` degrees of freedom, rescaled by
    /// `√((ν − 2)/ν)` to unit variance.
    StudentT { dof: f64 },
}

impl NoiseModel {
    pub fn student_t(dof: f64) -> Result<Self> {
        if !(dof > 2.0) || !dof.is_finite() {
            return Err(Error::InvalidArgument(
                "student-t noise needs finite degrees of freedom > 2",
            ));
        }
        Ok(Self::StudentT { dof })
    }

    pub fn variance(&self) -> f64 {
        match self {
            Self::Zero => 0.0,
            _ => 1.0,
        }
    }

    pub fn sampler(&self) -> Result<NoiseSampler> {
        let kind = match *self {
            Self::Zero => SamplerKind::Zero,
            Self::Gaussian => SamplerKind::Gaussian,
            Self::Rademacher => SamplerKind::Rademacher,
            Self::Uniform => SamplerKind::Uniform,
            Self::StudentT { dof } => {
                Self::student_t(dof)?;
                let dist = StudentT::new(dof)
                    .map_err(|_| Error::InvalidArgument("invalid student-t parameter"))?;
                SamplerKind::StudentT {
                    dist,
                    scale: math::sqrt((dof - 2.0) / dof),
                }
            }
        };
        Ok(NoiseSampler { kind })
    }
}

/// A [`NoiseModel`] with its distribution objects pre-built.
#[derive(Debug, Clone)]
pub struct NoiseSampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Zero,
    Gaussian,
    Rademacher,
    Uniform,
    StudentT { dist: StudentT<f64>, scale: f64 },
}

const SQRT_3: f64 = 1.732_050_807_568_877_2;

impl NoiseSampler {
    pub fn is_zero(&self) -> bool {
        matches!(self.kind, SamplerKind::Zero)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            SamplerKind::Zero => 0.0,
            SamplerKind::Gaussian => StandardNormal.sample(rng),
            SamplerKind::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            SamplerKind::Uniform => rng.random_range(-SQRT_3..SQRT_3),
            SamplerKind::StudentT { dist, scale } => scale * dist.sample(rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn moments(model: NoiseModel, n: usize) -> (f64, f64) {
        let sampler = model.sampler().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let w = sampler.sample(&mut rng);
            sum += w;
            sq += w * w;
        }
        let mean = sum / n as f64;
        (mean, sq / n as f64 - mean * mean)
    }

    #[test]
    fn every_model_is_centered_with_bounded_variance() {
        let models = [
            NoiseModel::Zero,
            NoiseModel::Gaussian,
            NoiseModel::Rademacher,
            NoiseModel::Uniform,
            NoiseModel::StudentT { dof: 5.0 },
        ];
        for model in models {
            let (mean, var) = moments(model, 1_000_000);
            assert!(mean.abs() <= 5e-3, "{model:?} mean {mean}");
            assert!((0.0..=1.02).contains(&var), "{model:?} variance {var}");
        }
    }

    #[test]
    fn student_t_needs_more_than_two_dof() {
        assert!(NoiseModel::student_t(2.0).is_err());
        assert!(NoiseModel::student_t(f64::NAN).is_err());
        assert!(NoiseModel::StudentT { dof: 1.5 }.sampler().is_err());
        assert!(NoiseModel::student_t(3.0).is_ok());
    }
}
