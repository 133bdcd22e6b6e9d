//! Experiment harness for `zoquad-core`: config files, seeded replication,
//! aggregation and CSV/JSON output.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod seed;
pub mod summary;

pub use config::{Algorithm, ExperimentConfig, HessianSpec, MinimizerSpec, TestFunction};
pub use error::{LabError, Result};
pub use experiment::{run_experiment, run_experiment_with, Execution, ExperimentRecord, Status};
pub use output::{read_records, write_outputs, OutputPaths};
pub use summary::{summarize, SummaryRow, SummaryStats};

/// Eigenvalues of the configured Hessian, or empty for `kl1d`.
pub fn config_eigenvalues(config: &ExperimentConfig) -> Result<Vec<f64>> {
    match &config.hessian {
        Some(h) if config.algorithm != Algorithm::Kl1d => {
            Ok(zoquad_core::jacobi_eigh(&h.matrix()?)?.eigenvalues().to_vec())
        }
        _ => Ok(Vec::new()),
    }
}
