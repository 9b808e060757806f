//! Error type for reference handling and metrics.

use mprk_core::AbortReason;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("reference generation for '{problem}' aborted: {reason}")]
    Generation { problem: String, reason: &'static str },
    #[error("t = {t} outside reference span [{t0}, {t_end}]")]
    OutOfDomain { t: f64, t0: f64, t_end: f64 },
    #[error("corrupt reference file {path}: {detail}")]
    Corrupt { path: String, detail: String },
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] mprk_core::CoreError),
}

impl BenchError {
    pub fn generation(problem: &str, reason: AbortReason) -> Self {
        BenchError::Generation {
            problem: problem.to_string(),
            reason: reason.as_str(),
        }
    }
}
