//! Bayesian optimization of DSP controller gains over a mixed
//! continuous/categorical domain.
//!
//! A Matérn-5/2 Gaussian process interpolates the (deterministic) cost
//! surface; proposals maximize expected improvement in phase one and
//! probability of improvement in phase two, searching the continuous block
//! separately for each limiter gain κ2.

pub mod acquisition;
pub mod domain;
pub mod gp;
pub mod lhs;
pub mod neldermead;
pub mod tune;

pub use acquisition::{expected_improvement, normal_cdf, normal_pdf, prob_improvement};
pub use domain::SearchDomain;
pub use gp::GpModel;
pub use tune::{minimize_objective, tune_controller, Phase, TraceEntry, TuneConfig, TuneTrace};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TuneError {
    #[error("need at least {needed} distinct points, got {got}")]
    NotEnoughData { needed: usize, got: usize },
    #[error("duplicate inputs with conflicting targets at rows {a} and {b}")]
    ConflictingDuplicates { a: usize, b: usize },
    #[error("covariance factorization failed (non-positive pivot {pivot:e})")]
    Factorization { pivot: f64 },
}
