//! Error types shared across the solver layers.

use thiserror::Error;

/// Failure while evaluating user-supplied production/destruction/rest terms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("non-finite value in component {index} at t = {t}")]
    NonFinite { index: usize, t: f64 },
}

/// Failure of a single integration step.
///
/// The adaptive driver treats every variant as a rejection: the step is
/// retried with half the step size.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("non-positive Patankar-weight denominator in component {index}")]
    NonPositiveWeight { index: usize },
    #[error("stage solution lost positivity or finiteness in component {index}")]
    NonPositiveState { index: usize },
    #[error("numerically singular linear system (pivot {pivot:e})")]
    SingularSystem { pivot: f64 },
    #[error("non-finite controller quantity: {what}")]
    NonFiniteControl { what: &'static str },
}

/// Construction and validation errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("infeasible scheme parameter: {0}")]
    InfeasibleParameter(String),
    #[error("singular denominator in tableau formulas: {0}")]
    SingularDenominator(String),
    #[error("initial value y0[{index}] = {value} is negative")]
    NegativeInitial { index: usize, value: f64 },
    #[error("invalid problem definition: {0}")]
    InvalidProblem(String),
}
