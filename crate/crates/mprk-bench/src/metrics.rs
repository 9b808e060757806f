//! Work-precision metrics: trapezoidal relative L2 error over an adaptive
//! mesh and the per-tolerance work-precision point.

use mprk_core::{integrate_adaptive, AdaptiveOptions, DspGains, MprkScheme, SolveReport};

use crate::error::BenchError;
use crate::problems::Benchmark;
use crate::reference::{eval_reference, ReferenceSolution};

/// One row of a work-precision diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpPoint {
    pub tol: f64,
    /// Relative L2 error; NaN when no step was accepted.
    pub err: f64,
    pub s: u64,
    pub r: u64,
    pub aborted: bool,
}

impl WpPoint {
    pub fn total_steps(&self) -> u64 {
        self.s + self.r
    }
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Trapezoidal approximation of the relative L2 error over `[t_0, t_K]`.
pub fn l2err_rel(
    times: &[f64],
    states: &[Vec<f64>],
    reference: &ReferenceSolution,
) -> Result<f64, BenchError> {
    assert!(times.len() >= 2, "need at least one accepted step");
    let refs: Vec<Vec<f64>> = times
        .iter()
        .map(|&t| eval_reference(reference, t))
        .collect::<Result<_, _>>()?;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..times.len() - 1 {
        let half_dt = 0.5 * (times[k + 1] - times[k]);
        num += half_dt * (sq_dist(&refs[k], &states[k]) + sq_dist(&refs[k + 1], &states[k + 1]));
        den += half_dt * (sq_norm(&refs[k]) + sq_norm(&refs[k + 1]));
    }
    Ok((num / den).sqrt())
}

/// Error of an adaptive run: the relative L2 error over whatever mesh was
/// accepted, or NaN when `K = 0`.
pub fn err(report: &SolveReport, reference: &ReferenceSolution) -> f64 {
    if report.k() == 0 {
        return f64::NAN;
    }
    l2err_rel(&report.times, &report.states, reference)
        .expect("accepted mesh lies inside the reference span")
}

/// Run one `(problem, tolerance)` cell and summarize it.
pub fn wp_point(
    bench: &Benchmark,
    scheme: &MprkScheme,
    gains: &DspGains,
    tol: f64,
    reference: &ReferenceSolution,
    opts: &AdaptiveOptions,
) -> WpPoint {
    let report = integrate_adaptive(&bench.problem, scheme, gains, tol, opts);
    WpPoint {
        tol,
        err: err(&report, reference),
        s: report.s,
        r: report.r,
        aborted: report.aborted.is_some(),
    }
}
