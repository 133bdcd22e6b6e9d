use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use zoquad_core::kl1d::{kl_search_1d, NoisyFunction1d};
use zoquad_core::solvers::{hessian_dependent_solve, universal_solve};
use zoquad_core::theory::{hard_instance, random_signs};
use zoquad_core::{jacobi_eigh, EigenDecomposition, OracleSession, QuadraticObjective, SymmetricMatrix};

use crate::config::{Algorithm, ExperimentConfig, MinimizerSpec};
use crate::error::Result;
use crate::seed::mix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
        }
    }
}

/// One replication at one budget. Failed runs carry `regret = NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub algorithm: Algorithm,
    pub d: usize,
    pub budget: u64,
    pub replication: u32,
    pub seed: u64,
    /// Exact `f(x_T) − f*`.
    pub regret: f64,
    pub queries_used: u64,
    pub wall_ns: u64,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Shared, per-config state: the Hessian and its eigensystem.
struct Prepared {
    hessian: Option<(SymmetricMatrix, EigenDecomposition)>,
}

/// Runs every `(T, replication)` pair in parallel. Records come back sorted
/// by `(T, replication)`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    run_experiment_with(config, Execution::Parallel)
}

pub fn run_experiment_with(config: &ExperimentConfig, execution: Execution) -> Result<Vec<ExperimentRecord>> {
    config.validate()?;
    let hessian = match &config.hessian {
        Some(h) if config.algorithm != Algorithm::Kl1d => {
            let a = h.matrix()?;
            let eig = jacobi_eigh(&a)?;
            Some((a, eig))
        }
        _ => None,
    };
    let prepared = Prepared { hessian };
    let mut jobs: Vec<(u64, u32)> = config
        .budgets
        .iter()
        .flat_map(|&t| (0..config.replications).map(move |r| (t, r)))
        .collect();
    jobs.sort_unstable();
    jobs.dedup();
    let run = |&(t, r): &(u64, u32)| run_one(config, &prepared, t, r);
    let records = match execution {
        Execution::Serial => jobs.iter().map(run).collect(),
        Execution::Parallel => jobs.par_iter().map(run).collect(),
    };
    Ok(records)
}

fn run_one(config: &ExperimentConfig, prepared: &Prepared, budget: u64, replication: u32) -> ExperimentRecord {
    let seed = mix64(config.base_seed, budget, u64::from(replication));
    let start = Instant::now();
    let outcome = match config.algorithm {
        Algorithm::Kl1d => solve_kl(config, seed),
        _ => solve_quadratic(config, prepared, budget, seed),
    };
    let wall_ns = if config.wall_clock {
        start.elapsed().as_nanos().min(u128::from(u64::MAX)) as u64
    } else {
        0
    };
    let (regret, queries_used, status) = match outcome {
        Ok((regret, queries)) => (regret, queries, Status::Ok),
        Err(_) => (f64::NAN, 0, Status::Failed),
    };
    ExperimentRecord {
        experiment: config.name.clone(),
        algorithm: config.algorithm,
        d: config.dim(),
        budget,
        replication,
        seed,
        regret,
        queries_used,
        wall_ns,
        status,
    }
}

fn solve_quadratic(config: &ExperimentConfig, prepared: &Prepared, budget: u64, seed: u64) -> Result<(f64, u64)> {
    let (a, eig) = prepared.hessian.as_ref().expect("validated quadratic config");
    let d = a.dim();
    // instance randomness on its own ChaCha stream, the oracle uses stream 0
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let x0 = match &config.minimizer {
        MinimizerSpec::Explicit(x) => x.clone(),
        MinimizerSpec::HardInstance => {
            let signs = random_signs(&mut rng, d);
            hard_instance(eig.eigenvalues(), budget, &signs)?.minimizer_in_basis(eig)?
        }
        MinimizerSpec::RandomInBall => random_in_ball(&mut rng, d),
    };
    let objective = QuadraticObjective::new(a.clone(), x0)?;
    let mut session = OracleSession::new(objective.clone(), config.noise, budget, seed)?;
    let report = match config.algorithm {
        Algorithm::Dependent => hessian_dependent_solve(&mut session, eig, budget)?,
        Algorithm::Universal => universal_solve(&mut session, budget)?,
        Algorithm::Kl1d => unreachable!(),
    };
    Ok((objective.evaluate(&report.x_final)?, report.queries_used))
}

fn solve_kl(config: &ExperimentConfig, seed: u64) -> Result<(f64, u64)> {
    let kl = config.kl.expect("validated kl1d config");
    let f = kl.function;
    let mut oracle = NoisyFunction1d::new(move |x| f.eval(x), config.noise, seed)?;
    let out = kl_search_1d(&f.problem(), &mut oracle, kl.eps, kl.delta)?;
    Ok((f.eval(out.x), out.calls))
}

/// Uniform in the unit ball: Gaussian direction, radius `U^{1/d}`.
fn random_in_ball(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let n = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let r = rng.random::<f64>().powf(1.0 / d as f64);
    g.iter().map(|v| v * r / n).collect()
}
