//! Positivity- and conservativity-preserving time integration based on
//! modified Patankar-Runge-Kutta (MPRK) schemes.
//!
//! The crate is organized in layers:
//!
//! - [`pdrs`] — production-destruction-rest systems (PDRS), the problem
//!   class all schemes consume, plus splitting utilities.
//! - [`tableau`] / [`scheme`] — Butcher tableaux and the MPRK22(α),
//!   MPRK43(α,β), MPRK43(γ) families with their Patankar-weight exponents.
//! - [`step`] — one linearly implicit step returning the high-order result
//!   together with the embedded lower-order result σ.
//! - [`controller`] — weighted error estimate and the DSP step size
//!   controller with arctan limiter and safety rejection.
//! - [`driver`] — adaptive and fixed-step integration loops.
//!
//! All state vectors are plain `Vec<f64>`; system sizes are small (N ≤ 8
//! for every shipped benchmark), so dense O(N³) linear algebra in
//! [`linalg`] is used throughout.

pub mod controller;
pub mod driver;
pub mod error;
pub mod linalg;
pub mod pdrs;
pub mod scheme;
pub mod step;
pub mod tableau;

pub use controller::{ControllerParams, ControllerState, Decision, DspGains, RejectHistory};
pub use driver::{integrate_adaptive_with, 
    integrate_adaptive, integrate_fixed, AbortReason, AdaptiveOptions, Attempt, SolveReport,
};
pub use error::{CoreError, EvalError, StepError};
pub use pdrs::{sanitize_initial, split_rhs, PdTables, PdrsProblem, SplitMode};
pub use scheme::{MprkScheme, SchemeFamily};
pub use step::{mprk_step, StepOutput};
pub use tableau::ButcherTableau;
