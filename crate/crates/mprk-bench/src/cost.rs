//! The controller tuning objective.
//!
//! For a k-th order method, a test suite T and tolerances TOL, the total
//! cost is `Σ_test ψ(Σ_tol (C_Step + C_tol,s))` with
//! `ψ(x) = arctan(x/100)²`,
//! `C_Step = k ln(S* + R*) + ln(err/tol)` and
//! `C_tol,s = max(0, ln(err/(s tol)))`.
//!
//! Aborted runs substitute penalty counts `S*` or `R* = 10 max(S_max,
//! R_max) = 1e7`; runs without a single accepted step contribute a
//! saturating inner value instead. Work-precision slopes between
//! consecutive completed runs must stay below -0.7 (-0.35 for the first
//! pair); a violation disqualifies the candidate, cancels all remaining
//! runs and adds M = 10 to the accumulated total.

use mprk_core::{integrate_adaptive, AbortReason, AdaptiveOptions, DspGains, MprkScheme};

use crate::metrics;
use crate::problems::Benchmark;
use crate::reference::ReferenceSolution;
use crate::suite::TOL_SET;

/// Configuration of the cost function.
#[derive(Debug, Clone)]
pub struct CostConfig {
    /// Tolerance slack `s`.
    pub s: f64,
    /// Tolerances in decreasing order.
    pub tols: Vec<f64>,
    /// Penalty count substituted on aborts: `10 max(S_max, R_max)`.
    pub penalty_counts: f64,
    /// Disqualification penalty `M`.
    pub disqualify_penalty: f64,
    pub slope_bound_first: f64,
    pub slope_bound_rest: f64,
    /// Inner-sum contribution of a run with `K = 0`.
    pub sentinel_inner: f64,
    /// Cancel the remaining tests (not only the current one) on
    /// disqualification.
    pub cancel_remaining_tests: bool,
}

impl Default for CostConfig {
    fn default() -> Self {
        Self {
            s: 1.0,
            tols: TOL_SET.to_vec(),
            penalty_counts: 1e7,
            disqualify_penalty: 10.0,
            slope_bound_first: -0.35,
            slope_bound_rest: -0.7,
            sentinel_inner: 1e3,
            cancel_remaining_tests: true,
        }
    }
}

/// Outcome of one `(test, tol)` run as consumed by [`cost`].
#[derive(Debug, Clone, Copy)]
pub struct CellOutcome {
    pub s: u64,
    pub r: u64,
    pub aborted: Option<AbortReason>,
    /// Relative L2 error; NaN when `K = 0`.
    pub err: f64,
}

/// `ψ(x) = arctan(x/100)²`, bounded by (π/2)² ≈ 2.467.
pub fn psi(x: f64) -> f64 {
    let a = (x / 100.0).atan();
    a * a
}

/// Step cost with abort penalty substitution.
pub fn c_step(outcome: &CellOutcome, tol: f64, k: u32, cfg: &CostConfig) -> f64 {
    let s_star = match outcome.aborted {
        Some(AbortReason::MaxAccepted | AbortReason::DtUnderflow) => cfg.penalty_counts,
        _ => outcome.s as f64,
    };
    let r_star = match outcome.aborted {
        Some(AbortReason::MaxRejected) => cfg.penalty_counts,
        _ => outcome.r as f64,
    };
    k as f64 * (s_star + r_star).ln() + (outcome.err / tol).ln()
}

/// Tolerance-exceedance cost.
pub fn c_tol(err: f64, tol: f64, s: f64) -> f64 {
    (err / (s * tol)).ln().max(0.0)
}

/// Per-cell record inside a [`CostBreakdown`].
#[derive(Debug, Clone, Copy)]
pub struct CellRecord {
    pub tol: f64,
    pub err: f64,
    pub s: u64,
    pub r: u64,
    pub aborted: Option<AbortReason>,
    /// NaN for sentinel cells (inner sum took `sentinel_inner` instead).
    pub c_step: f64,
    pub c_tol: f64,
}

#[derive(Debug, Clone)]
pub struct TestBreakdown {
    pub test: String,
    pub cells: Vec<CellRecord>,
    pub inner_sum: f64,
    pub psi: f64,
    /// False when disqualification canceled the remaining tolerances.
    pub completed: bool,
}

#[derive(Debug, Clone)]
pub struct Disqualification {
    pub test: String,
    pub tol: f64,
    pub slope: f64,
}

#[derive(Debug, Clone)]
pub struct CostBreakdown {
    pub tests: Vec<TestBreakdown>,
    pub disqualified: Option<Disqualification>,
    pub total: f64,
}

/// Evaluate the cost over a lazily pulled grid of `(test, tol)` runs.
///
/// `run(test_index, tol)` is invoked in test order and decreasing
/// tolerance order; after a slope violation no further cells are pulled
/// for the canceled scope.
pub fn cost<F>(k: u32, test_names: &[String], cfg: &CostConfig, mut run: F) -> CostBreakdown
where
    F: FnMut(usize, f64) -> CellOutcome,
{
    let mut tests = Vec::with_capacity(test_names.len());
    let mut disqualified: Option<Disqualification> = None;

    'tests: for (ti, name) in test_names.iter().enumerate() {
        let mut cells = Vec::with_capacity(cfg.tols.len());
        let mut inner = 0.0;
        let mut wp: Vec<(f64, f64)> = Vec::new();
        let mut completed = true;

        for &tol in &cfg.tols {
            let out = run(ti, tol);
            let (cs, ct) = if out.err.is_nan() {
                inner += cfg.sentinel_inner;
                (f64::NAN, f64::NAN)
            } else {
                let cs = c_step(&out, tol, k, cfg);
                let ct = c_tol(out.err, tol, cfg.s);
                inner += cs + ct;
                (cs, ct)
            };
            cells.push(CellRecord {
                tol,
                err: out.err,
                s: out.s,
                r: out.r,
                aborted: out.aborted,
                c_step: cs,
                c_tol: ct,
            });

            // Aborted or empty runs carry their penalties but never enter
            // the slope check.
            if out.aborted.is_none() && out.err.is_finite() && out.s + out.r > 0 {
                wp.push(((out.s + out.r) as f64, out.err));
                if wp.len() >= 2 {
                    let (n0, e0) = wp[wp.len() - 2];
                    let (n1, e1) = wp[wp.len() - 1];
                    let bound = if wp.len() == 2 {
                        cfg.slope_bound_first
                    } else {
                        cfg.slope_bound_rest
                    };
                    let slope = (e1.ln() - e0.ln()) / (n1.ln() - n0.ln());
                    // Equal step counts make the segment vertical, which is
                    // no improvement and violates as well.
                    if n1 == n0 || !(slope < bound) {
                        if disqualified.is_none() {
                            disqualified = Some(Disqualification {
                                test: name.clone(),
                                tol,
                                slope,
                            });
                        }
                        completed = false;
                        tests.push(TestBreakdown {
                            test: name.clone(),
                            cells,
                            inner_sum: inner,
                            psi: psi(inner),
                            completed,
                        });
                        if cfg.cancel_remaining_tests {
                            break 'tests;
                        }
                        continue 'tests;
                    }
                }
            }
        }

        tests.push(TestBreakdown {
            test: name.clone(),
            cells,
            inner_sum: inner,
            psi: psi(inner),
            completed,
        });
    }

    let mut total: f64 = tests.iter().map(|t| t.psi).sum();
    if disqualified.is_some() {
        total += cfg.disqualify_penalty;
    }
    CostBreakdown {
        tests,
        disqualified,
        total,
    }
}

/// Cost of one controller candidate over a suite with ready references.
pub fn cost_on_suite(
    scheme: &MprkScheme,
    gains: &DspGains,
    suite: &[(Benchmark, ReferenceSolution)],
    cfg: &CostConfig,
    opts: &AdaptiveOptions,
) -> CostBreakdown {
    let names: Vec<String> = suite.iter().map(|(b, _)| b.name().to_string()).collect();
    cost(scheme.order, &names, cfg, |ti, tol| {
        let (bench, reference) = &suite[ti];
        let report = integrate_adaptive(&bench.problem, scheme, gains, tol, opts);
        CellOutcome {
            s: report.s,
            r: report.r,
            aborted: report.aborted,
            err: metrics::err(&report, reference),
        }
    })
}
