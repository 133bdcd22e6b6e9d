use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{tolerance:e}")]
    NotPsd { eigenvalue: f64, tolerance: f64 },

    #[error("query budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("query point has norm {norm} outside the unit ball")]
    OutsideDomain { norm: f64 },

    #[error("budget {budget} is infeasible: {what} needs at least {minimum}")]
    InfeasibleBudget {
        what: &'static str,
        budget: u64,
        minimum: u64,
    },

    #[error("hard instance infeasible at T = {budget}: minimizer norm {norm} > 1, need T >= {minimum}")]
    InfeasibleInstance { budget: u64, norm: f64, minimum: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("degenerate constant: {0}")]
    Degenerate(&'static str),
}
