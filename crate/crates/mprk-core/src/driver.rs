//! Adaptive and fixed-step integration loops.

use crate::controller::{advance, ControllerParams, ControllerState, Decision, DspGains};
use crate::error::StepError;
use crate::pdrs::PdrsProblem;
use crate::scheme::MprkScheme;
use crate::step::mprk_step;

/// Why an adaptive run stopped before reaching `t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbortReason {
    /// `S = S_max` successful steps.
    MaxAccepted,
    /// `R = R_max` rejected steps.
    MaxRejected,
    /// `R >= 100 (S + 1)`.
    RejectRatio,
    /// `Δt < 10^-100`.
    DtUnderflow,
}

impl AbortReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            AbortReason::MaxAccepted => "max-accepted",
            AbortReason::MaxRejected => "max-rejected",
            AbortReason::RejectRatio => "reject-ratio",
            AbortReason::DtUnderflow => "dt-underflow",
        }
    }
}

/// Abort limits and bookkeeping switches for [`integrate_adaptive`].
#[derive(Debug, Clone)]
pub struct AdaptiveOptions {
    pub s_max: u64,
    pub r_max: u64,
    /// Abort when `R >= ratio * (S + 1)`.
    pub reject_ratio: f64,
    pub dt_min: f64,
    /// Record every attempt (accepted and rejected) in the report.
    pub record_attempts: bool,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            s_max: 1_000_000,
            r_max: 10_000,
            reject_ratio: 100.0,
            dt_min: 1e-100,
            record_attempts: false,
        }
    }
}

/// One attempted step, for trajectory dumps.
#[derive(Debug, Clone)]
pub struct Attempt {
    /// Time the attempt would land on (start time + dt).
    pub t: f64,
    pub dt: f64,
    pub accepted: bool,
    /// Candidate state; `None` when the step itself failed.
    pub y: Option<Vec<f64>>,
}

/// Accepted trajectory plus counters of one adaptive run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub s: u64,
    pub r: u64,
    pub aborted: Option<AbortReason>,
    pub attempts: Option<Vec<Attempt>>,
}

impl SolveReport {
    /// Number of accepted steps (`K`).
    pub fn k(&self) -> usize {
        self.times.len() - 1
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().unwrap()
    }
}

/// Integrate `problem` from `t0` to `t_end` with `atol = rtol = tol`.
///
/// The last step is clamped to land exactly on `t_end`. Scheme-level step
/// failures count as rejections retried with half the step size. Abort
/// conditions are encoded in the report, not raised.
pub fn integrate_adaptive(
    problem: &PdrsProblem,
    scheme: &MprkScheme,
    gains: &DspGains,
    tol: f64,
    opts: &AdaptiveOptions,
) -> SolveReport {
    let params = ControllerParams::new(*gains, tol, scheme.order);
    integrate_adaptive_with(problem, scheme, &params, opts)
}

/// [`integrate_adaptive`] with full controller configuration.
pub fn integrate_adaptive_with(
    problem: &PdrsProblem,
    scheme: &MprkScheme,
    params: &ControllerParams,
    opts: &AdaptiveOptions,
) -> SolveReport {
    let mut t = problem.t0;
    let mut y = problem.y0.clone();
    let mut dt = problem.dt0;
    let mut state = ControllerState::new(dt);
    let mut times = vec![t];
    let mut states = vec![y.clone()];
    let mut attempts = opts.record_attempts.then(Vec::new);
    let mut aborted = None;

    while t < problem.t_end {
        if state.s >= opts.s_max {
            aborted = Some(AbortReason::MaxAccepted);
            break;
        }
        if state.r >= opts.r_max {
            aborted = Some(AbortReason::MaxRejected);
            break;
        }
        if state.r as f64 >= opts.reject_ratio * (state.s + 1) as f64 {
            aborted = Some(AbortReason::RejectRatio);
            break;
        }
        if dt < opts.dt_min {
            aborted = Some(AbortReason::DtUnderflow);
            break;
        }

        let remaining = problem.t_end - t;
        let (dt_attempt, clamped) = if dt >= remaining {
            (remaining, true)
        } else {
            (dt, false)
        };

        match mprk_step(problem, scheme, &y, t, dt_attempt) {
            Err(_) => {
                state.note_failure();
                if let Some(log) = attempts.as_mut() {
                    log.push(Attempt {
                        t: t + dt_attempt,
                        dt: dt_attempt,
                        accepted: false,
                        y: None,
                    });
                }
                dt = dt_attempt / 2.0;
            }
            Ok(out) => {
                // advance() fails only on non-finite step output, which
                // mprk_step has excluded.
                let decision =
                    advance(&mut state, &out.y_next, &out.sigma, dt_attempt, params)
                        .expect("finite step output");
                match decision {
                    Decision::Reject { dt_retry } => {
                        if let Some(log) = attempts.as_mut() {
                            log.push(Attempt {
                                t: t + dt_attempt,
                                dt: dt_attempt,
                                accepted: false,
                                y: Some(out.y_next),
                            });
                        }
                        dt = dt_retry;
                    }
                    Decision::Accept { dt_next } => {
                        t = if clamped {
                            problem.t_end
                        } else {
                            (t + dt_attempt).min(problem.t_end)
                        };
                        y = out.y_next;
                        times.push(t);
                        states.push(y.clone());
                        if let Some(log) = attempts.as_mut() {
                            log.push(Attempt {
                                t,
                                dt: dt_attempt,
                                accepted: true,
                                y: Some(y.clone()),
                            });
                        }
                        dt = dt_next;
                    }
                }
            }
        }
    }

    SolveReport {
        times,
        states,
        s: state.s,
        r: state.r,
        aborted,
        attempts,
    }
}

/// Fixed-step integration with `n_steps` equal steps over the full span.
///
/// With `propagate_embedded` the embedded result σ is carried forward
/// instead of the order-k result, which exposes the embedded method's own
/// order of convergence.
pub fn integrate_fixed(
    problem: &PdrsProblem,
    scheme: &MprkScheme,
    n_steps: u64,
    propagate_embedded: bool,
) -> Result<(f64, Vec<f64>), StepError> {
    let dt = (problem.t_end - problem.t0) / n_steps as f64;
    let mut y = problem.y0.clone();
    let mut t = problem.t0;
    for i in 1..=n_steps {
        let out = mprk_step(problem, scheme, &y, t, dt)?;
        y = if propagate_embedded {
            out.sigma
        } else {
            out.y_next
        };
        t = problem.t0 + i as f64 * dt;
    }
    Ok((t, y))
}
