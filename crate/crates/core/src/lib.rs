//! Stochastic zeroth-order optimization of quadratic objectives.
//!
//! The crate is split along the lines of the algorithms it hosts:
//!
//! * [`linalg`], [`objective`], [`noise`] and [`oracle`] model the problem:
//!   a PSD quadratic `f(x) = ½(x − x0)ᵀA(x − x0)` observed only through a
//!   budgeted oracle returning `f(x) + w` on the unit ball.
//! * [`estimators`] holds the averaging and truncated (clamped) estimators,
//!   the analytic truncation bounds and the Hessian estimator.
//! * [`solvers`] implements the Hessian-aware energy-allocation algorithm and
//!   the Hessian-free two-step quadratic search.
//! * [`theory`] provides the closed-form regret predictors and hard instances.
//! * [`kl1d`] is a 1D gradient-free search for functions satisfying a
//!   Kurdyka–Łojasiewicz growth condition.
//!
//! Everything here is `no_std` + `alloc`; IO, configuration and the CLI live
//! in the companion `zoquad-lab` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod estimators;
pub mod kl1d;
pub mod linalg;
pub mod noise;
pub mod objective;
pub mod oracle;
pub mod solvers;
pub mod theory;

mod math;

pub use error::{Error, Result};
pub use linalg::{jacobi_eigh, trace_inv_sqrt, EigenDecomposition, SymmetricMatrix};
pub use noise::NoiseModel;
pub use objective::QuadraticObjective;
pub use oracle::OracleSession;
