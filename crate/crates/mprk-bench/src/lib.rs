//! Benchmark problems, reference solutions and the work-precision cost
//! function used to rate step size controllers.
//!
//! - [`problems`] — the five shipped production-destruction benchmarks.
//! - [`reference`] — reference trajectory generation with on-disk caching
//!   and dense cubic Hermite evaluation.
//! - [`metrics`] — trapezoidal relative L2 error and work-precision points.
//! - [`cost`] — the tuning objective: per-tolerance step and tolerance
//!   costs, the ψ transform, abort penalties and slope disqualification.
//! - [`suite`] — training/validation suites and the standard controller
//!   list.

pub mod cost;
pub mod error;
pub mod metrics;
pub mod problems;
pub mod reference;
pub mod suite;

pub use cost::{cost, cost_on_suite, psi, CellOutcome, CostBreakdown, CostConfig};
pub use error::BenchError;
pub use metrics::{err, l2err_rel, wp_point, WpPoint};
pub use problems::{make_brusselator, make_hires, make_npzd, make_pr4, make_robertson, Benchmark};
pub use reference::{eval_reference, CacheStatus, RefTrajectory, ReferenceSolution, ReferenceStore};
pub use suite::{p1_gains, standard_controllers, training_suite, validation_suite, TOL_SET};
