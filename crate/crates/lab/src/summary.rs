use serde::{Deserialize, Serialize};
use zoquad_core::theory::lower_bound_witness;

use crate::error::{LabError, Result};
use crate::experiment::{ExperimentRecord, Status};

/// Aggregates at one budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    #[serde(rename = "T")]
    pub budget: u64,
    pub mean_regret: f64,
    /// Sample standard deviation over `√R`.
    pub stderr: f64,
    #[serde(rename = "regret_times_T")]
    pub regret_times_t: f64,
    /// `½ (Σ λ^{-1/2})²` over the positive eigenvalues.
    pub theorem1_constant: f64,
    /// `(Σ λ^{-1/2})² / (8T)`, absent when the hard instance does not fit at `T`.
    pub witness_floor: Option<f64>,
    /// `regret_times_T / theorem1_constant`.
    pub ratio: f64,
    /// Successful replications aggregated.
    #[serde(skip)]
    pub replications: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub rows: Vec<SummaryRow>,
}

impl SummaryStats {
    pub fn row(&self, budget: u64) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.budget == budget)
    }
}

/// Per-budget statistics over successful records. Input order does not
/// matter: records are sorted by `(T, replication)` before summation.
pub fn summarize(records: &[ExperimentRecord], eigenvalues: &[f64]) -> Result<SummaryStats> {
    if records.is_empty() {
        return Err(LabError::Config("no records to summarize".into()));
    }
    let positive: Vec<f64> = eigenvalues.iter().copied().filter(|&l| l > 0.0).collect();
    let s: f64 = positive.iter().map(|l| 1.0 / l.sqrt()).sum();
    let constant = 0.5 * s * s;

    let mut sorted: Vec<&ExperimentRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.budget, r.replication));

    let mut rows = Vec::new();
    for group in sorted.chunk_by(|a, b| a.budget == b.budget) {
        let budget = group[0].budget;
        let regrets: Vec<f64> = group
            .iter()
            .filter(|r| r.status == Status::Ok && r.regret.is_finite())
            .map(|r| r.regret)
            .collect();
        let n = regrets.len();
        if n < 2 {
            return Err(LabError::Config(format!(
                "budget {budget}: {n} successful replications, need at least 2"
            )));
        }
        let mean = regrets.iter().sum::<f64>() / n as f64;
        let var = regrets.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1) as f64;
        let t = budget as f64;
        let scaled = mean * t;
        rows.push(SummaryRow {
            budget,
            mean_regret: mean,
            stderr: (var / n as f64).sqrt(),
            regret_times_t: scaled,
            theorem1_constant: constant,
            witness_floor: if positive.is_empty() {
                None
            } else {
                lower_bound_witness(&positive, budget).ok()
            },
            ratio: if constant > 0.0 { scaled / constant } else { f64::NAN },
            replications: n,
        });
    }
    Ok(SummaryStats { rows })
}
