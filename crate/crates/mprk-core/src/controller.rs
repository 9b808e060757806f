//! Weighted error estimate and the DSP step size controller.
//!
//! The controller multiplies the attempted step size by
//! `L_κ2(ε_{n+1}^{β1/k} ε_n^{β2/k} ε_{n-1}^{β3/k} (Δt_n/Δt_{n-1})^{-α2})`
//! with the arctan limiter `L_κ2(x) = 1 + κ2·arctan((x - 1)/κ2)`. A step is
//! rejected whenever the limited factor falls below the safety value
//! `s_f = 0.81`; the rejected attempt is recalculated with the new step
//! size, and its error estimate is shifted into the history like any other
//! attempt.

use crate::error::StepError;

/// Machine precision used in `ε = 1/max(eps, w)`; fixed to `2^-52` for
/// reproducibility across platforms.
pub const MACHINE_EPS: f64 = 2.220_446_049_250_313e-16;

/// Default safety factor below which steps are rejected.
pub const DEFAULT_SAFETY: f64 = 0.81;

/// The five controller gains searched by the tuner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DspGains {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub alpha2: f64,
    /// Limiter gain, one of {1, 2, 3, 4}.
    pub kappa2: u8,
}

impl DspGains {
    pub const fn new(beta1: f64, beta2: f64, beta3: f64, alpha2: f64, kappa2: u8) -> Self {
        Self {
            beta1,
            beta2,
            beta3,
            alpha2,
            kappa2,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [
            self.beta1,
            self.beta2,
            self.beta3,
            self.alpha2,
            self.kappa2 as f64,
        ]
    }
}

impl std::fmt::Display for DspGains {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.beta1, self.beta2, self.beta3, self.alpha2, self.kappa2
        )
    }
}

/// Whether a rejected attempt's error estimate stays in the history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RejectHistory {
    /// Shift on every attempt; the controller output is defined from the
    /// rejected attempt.
    #[default]
    Shift,
    /// Drop the rejected attempt's ε and Δt again (ablation switch).
    Discard,
}

/// Full controller configuration for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerParams {
    pub gains: DspGains,
    pub sf: f64,
    pub atol: f64,
    pub rtol: f64,
    /// Order of the main method.
    pub k: u32,
    pub reject_history: RejectHistory,
}

impl ControllerParams {
    pub fn new(gains: DspGains, tol: f64, k: u32) -> Self {
        Self {
            gains,
            sf: DEFAULT_SAFETY,
            atol: tol,
            rtol: tol,
            k,
            reject_history: RejectHistory::Shift,
        }
    }
}

/// Error and step size history plus accept/reject counters.
#[derive(Debug, Clone)]
pub struct ControllerState {
    /// `(ε_{n+1}, ε_n, ε_{n-1})`, newest first.
    pub eps_hist: [f64; 3],
    /// `(Δt_n, Δt_{n-1})`, newest first.
    pub dt_hist: [f64; 2],
    /// Accepted steps.
    pub s: u64,
    /// Rejected steps.
    pub r: u64,
}

impl ControllerState {
    /// `ε_0 = ε_{-1} = 1`, `Δt_{-1} = Δt_0` so the first ratio factor is 1.
    pub fn new(dt0: f64) -> Self {
        Self {
            eps_hist: [1.0; 3],
            dt_hist: [dt0; 2],
            s: 0,
            r: 0,
        }
    }

    fn push(&mut self, eps: f64, dt: f64) {
        self.eps_hist = [eps, self.eps_hist[0], self.eps_hist[1]];
        self.dt_hist = [dt, self.dt_hist[0]];
    }

    /// Count a scheme-level step failure (no usable error estimate).
    pub fn note_failure(&mut self) {
        self.r += 1;
    }
}

/// Weighted RMS error estimate between the step result and σ.
pub fn weighted_error(
    y_next: &[f64],
    sigma: &[f64],
    atol: f64,
    rtol: f64,
) -> Result<f64, StepError> {
    let n = y_next.len();
    let mut acc = 0.0;
    for (y, s) in y_next.iter().zip(sigma) {
        let scale = atol + rtol * y.abs().max(s.abs());
        let e = (y - s) / scale;
        acc += e * e;
    }
    let w = (acc / n as f64).sqrt();
    if w.is_finite() {
        Ok(w)
    } else {
        Err(StepError::NonFiniteControl {
            what: "weighted error",
        })
    }
}

/// `ε = 1 / max(machine eps, w)`.
pub fn epsilon(w: f64) -> f64 {
    1.0 / MACHINE_EPS.max(w)
}

/// Arctan limiter `L_κ2`.
pub fn limiter(x: f64, kappa2: u8) -> f64 {
    let k = kappa2 as f64;
    1.0 + k * ((x - 1.0) / k).atan()
}

/// Limited controller factor from the current history.
///
/// The state must already contain the newest ε and the attempted Δt.
pub fn dsp_factor(state: &ControllerState, params: &ControllerParams) -> Result<f64, StepError> {
    let g = &params.gains;
    let k = params.k as f64;
    let [e1, e2, e3] = state.eps_hist;
    let raw = e1.powf(g.beta1 / k)
        * e2.powf(g.beta2 / k)
        * e3.powf(g.beta3 / k)
        * (state.dt_hist[0] / state.dt_hist[1]).powf(-g.alpha2);
    let f = limiter(raw, g.kappa2);
    if f.is_finite() {
        Ok(f)
    } else {
        Err(StepError::NonFiniteControl {
            what: "controller factor",
        })
    }
}

/// Accept/reject decision for one attempted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decision {
    Accept { dt_next: f64 },
    Reject { dt_retry: f64 },
}

/// Feed one attempted step into the controller.
///
/// The histories record every attempt; on a non-finite controller factor
/// the attempt counts as a rejection retried with `dt/2`.
pub fn advance(
    state: &mut ControllerState,
    y_next: &[f64],
    sigma: &[f64],
    dt_attempt: f64,
    params: &ControllerParams,
) -> Result<Decision, StepError> {
    let w = weighted_error(y_next, sigma, params.atol, params.rtol)?;
    let saved = (state.eps_hist, state.dt_hist);
    state.push(epsilon(w), dt_attempt);
    let factor = match dsp_factor(state, params) {
        Ok(f) => f,
        Err(_) => {
            state.r += 1;
            return Ok(Decision::Reject {
                dt_retry: dt_attempt / 2.0,
            });
        }
    };
    let dt_next = factor * dt_attempt;
    if factor < params.sf {
        state.r += 1;
        if params.reject_history == RejectHistory::Discard {
            (state.eps_hist, state.dt_hist) = saved;
        }
        Ok(Decision::Reject { dt_retry: dt_next })
    } else {
        state.s += 1;
        Ok(Decision::Accept { dt_next })
    }
}
