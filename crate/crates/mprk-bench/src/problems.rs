//! The five production-destruction benchmark problems.
//!
//! Every constructor returns a [`Benchmark`] bundling the PDRS definition
//! with an analytic solution where one exists. All conservative problems
//! define only their production terms and mirror `d_ij = p_ji`.

use std::sync::Arc;

use mprk_core::{PdTables, PdrsProblem};

use crate::error::BenchError;

/// Dense evaluator of an analytic solution `t -> y(t)`.
pub type AnalyticFn = dyn Fn(f64) -> Vec<f64> + Send + Sync;

/// A benchmark problem, optionally with its exact solution.
#[derive(Clone)]
pub struct Benchmark {
    pub problem: PdrsProblem,
    pub analytic: Option<Arc<AnalyticFn>>,
}

impl Benchmark {
    pub fn name(&self) -> &str {
        &self.problem.name
    }
}

impl std::fmt::Debug for Benchmark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Benchmark")
            .field("problem", &self.problem)
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

/// Construct a benchmark by name, e.g. `pr4:0.4`, `robertson`, `hires`.
pub fn by_name(spec: &str) -> Result<Benchmark, BenchError> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    match name {
        "pr4" => {
            let xi = match param {
                Some(p) => p
                    .parse::<f64>()
                    .map_err(|_| BenchError::UnknownProblem(spec.to_string()))?,
                None => 0.4,
            };
            if !(0.0..=0.5).contains(&xi) {
                return Err(BenchError::UnknownProblem(format!(
                    "{spec} (xi must lie in [0, 1/2])"
                )));
            }
            Ok(make_pr4(xi))
        }
        "robertson" => Ok(make_robertson()),
        "hires" => Ok(make_hires()),
        "npzd" => Ok(make_npzd()),
        "brusselator" => Ok(make_brusselator()),
        _ => Err(BenchError::UnknownProblem(spec.to_string())),
    }
}

/// Valid names for [`by_name`].
pub const PROBLEM_NAMES: [&str; 5] = ["pr4[:xi]", "robertson", "hires", "npzd", "brusselator"];

/// Forcing function of the PR4 problem.
pub fn pr4_g(t: f64) -> [f64; 4] {
    let s = (0.5 * (0.5 * t).cos() * t).sin();
    [2.0 + 0.3 * s, 2.0 + s, 1.0 - s, 1.0 - 0.3 * s]
}

/// Analytic derivative of [`pr4_g`].
pub fn pr4_g_prime(t: f64) -> [f64; 4] {
    // d/dt sin(0.5 cos(0.5t) t) = cos(0.5 cos(0.5t) t) (0.5 cos(0.5t) - 0.25 t sin(0.5t))
    let inner = 0.5 * (0.5 * t).cos() * t;
    let d = inner.cos() * (0.5 * (0.5 * t).cos() - 0.25 * t * (0.5 * t).sin());
    [0.3 * d, d, -d, -0.3 * d]
}

/// Prothero-Robinson-type problem on a 4x4 Metzler matrix with spectrum
/// `{0, -2, -1 ± (1-2ξ)i}`; the exact solution is the forcing function.
pub fn make_pr4(xi: f64) -> Benchmark {
    let y0 = pr4_g(0.0);
    let problem = PdrsProblem::new(
        format!("pr4_xi{xi}"),
        4,
        &y0,
        0.0,
        20.0 * std::f64::consts::PI,
        1.0,
        true,
        Arc::new(move |y: &[f64], t: f64, tab: &mut PdTables| {
            let g = pr4_g(t);
            let gp = pr4_g_prime(t);
            tab.set_p(0, 1, y[1]);
            tab.set_p(0, 2, g[0]);
            tab.set_p(0, 3, xi * (y[2] + g[1]) + gp[0].min(0.0));
            tab.set_p(1, 0, g[1]);
            tab.set_p(1, 3, y[3]);
            tab.set_p(1, 2, xi * (g[3] + y[0]) + gp[1].min(0.0));
            tab.set_p(2, 0, y[0]);
            tab.set_p(2, 3, g[2]);
            tab.set_p(2, 1, xi * (g[0] + y[3]) + gp[2].min(0.0));
            tab.set_p(3, 1, g[3]);
            tab.set_p(3, 2, y[2]);
            tab.set_p(3, 0, xi * (y[1] + g[2]) + gp[3].min(0.0));
            tab.mirror_conservative();
        }),
    )
    .expect("valid PR4 definition");
    Benchmark {
        problem,
        analytic: Some(Arc::new(|t| pr4_g(t).to_vec())),
    }
}

/// The stiff Robertson reaction over `[0, 1e8]`.
pub fn make_robertson() -> Benchmark {
    let problem = PdrsProblem::new(
        "robertson",
        3,
        &[1.0, 0.0, 0.0],
        0.0,
        1e8,
        1e-6,
        true,
        Arc::new(|y: &[f64], _t: f64, tab: &mut PdTables| {
            tab.set_p(0, 1, 1e4 * y[1] * y[2]);
            tab.set_p(1, 0, 0.04 * y[0]);
            tab.set_p(2, 1, 3e7 * y[1] * y[1]);
            tab.mirror_conservative();
        }),
    )
    .expect("valid Robertson definition");
    Benchmark {
        problem,
        analytic: None,
    }
}

/// The eight-species HIRES problem; a non-conservative PDRS whose rest
/// terms carry the constant inflow and the y7 feedback.
pub fn make_hires() -> Benchmark {
    let problem = PdrsProblem::new(
        "hires",
        8,
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0057],
        0.0,
        321.8122,
        0.5e-3,
        true,
        Arc::new(|y: &[f64], _t: f64, tab: &mut PdTables| {
            tab.set_p(0, 1, 0.43 * y[1]);
            tab.set_p(0, 2, 8.32 * y[2]);
            tab.set_p(1, 0, 1.71 * y[0]);
            tab.set_p(2, 3, 0.43 * y[3]);
            tab.set_p(2, 4, 0.035 * y[4]);
            tab.set_p(3, 1, 8.32 * y[1]);
            tab.set_p(3, 2, 1.71 * y[2]);
            tab.set_p(4, 5, 0.43 * y[5]);
            tab.set_p(5, 3, 0.69 * y[3]);
            tab.set_p(5, 4, 1.71 * y[4]);
            tab.set_p(6, 7, 280.0 * y[5] * y[7]);
            tab.set_p(7, 6, 1.81 * y[6]);
            tab.mirror_conservative();
            tab.rp[0] = 0.0007;
            tab.rp[4] = 0.43 * y[6];
            tab.rp[5] = 0.69 * y[6];
            tab.rd[5] = 280.0 * y[5] * y[7];
        }),
    )
    .expect("valid HIRES definition");
    Benchmark {
        problem,
        analytic: None,
    }
}

/// Nutrient-phytoplankton-zooplankton-detritus interaction over five hours.
pub fn make_npzd() -> Benchmark {
    let problem = PdrsProblem::new(
        "npzd",
        4,
        &[8.0, 2.0, 1.0, 4.0],
        0.0,
        5.0,
        1.0,
        true,
        Arc::new(|y: &[f64], _t: f64, tab: &mut PdTables| {
            tab.set_p(0, 1, 0.01 * y[1]);
            tab.set_p(0, 2, 0.01 * y[2]);
            tab.set_p(0, 3, 0.003 * y[3]);
            tab.set_p(1, 0, y[0] * y[1] / (0.01 + y[0]));
            tab.set_p(2, 1, 0.5 * (1.0 - (-1.21 * y[1] * y[1]).exp()) * y[2]);
            tab.set_p(3, 1, 0.05 * y[1]);
            tab.set_p(3, 2, 0.02 * y[2]);
            tab.mirror_conservative();
        }),
    )
    .expect("valid NPZD definition");
    Benchmark {
        problem,
        analytic: None,
    }
}

/// Six-species Brusselator reaction with unit rate constants.
pub fn make_brusselator() -> Benchmark {
    let problem = PdrsProblem::new(
        "brusselator",
        6,
        &[10.0, 10.0, 0.0, 0.0, 0.1, 0.1],
        0.0,
        10.0,
        0.1,
        true,
        Arc::new(|y: &[f64], _t: f64, tab: &mut PdTables| {
            tab.set_p(2, 1, y[1] * y[4]);
            tab.set_p(3, 4, y[4]);
            tab.set_p(4, 0, y[0]);
            tab.set_p(4, 5, y[4] * y[4] * y[5]);
            tab.set_p(5, 4, y[1] * y[4]);
            tab.mirror_conservative();
        }),
    )
    .expect("valid Brusselator definition");
    Benchmark {
        problem,
        analytic: None,
    }
}
