//! Training/validation suites and the standard controller list.

use mprk_core::DspGains;

use crate::problems::{make_brusselator, make_hires, make_npzd, make_pr4, make_robertson, Benchmark};

/// The tolerance set `{1e-1, ..., 1e-8}` in decreasing order.
pub const TOL_SET: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// Training problems in fixed evaluation order.
pub fn training_suite() -> Vec<Benchmark> {
    vec![make_pr4(0.4), make_robertson(), make_hires(), make_npzd()]
}

/// Validation problems: PR4 at other ξ values plus the Brusselator.
pub fn validation_suite() -> Vec<Benchmark> {
    vec![
        make_pr4(0.1),
        make_pr4(0.3),
        make_pr4(0.5),
        make_brusselator(),
    ]
}

/// The best-performing standard controller `p1 = (2,-1,0,-1,1)`.
pub fn p1_gains() -> DspGains {
    DspGains::new(2.0, -1.0, 0.0, -1.0, 1)
}

/// `p2 = (0.7,-0.4,0,0,1)`.
pub fn p2_gains() -> DspGains {
    DspGains::new(0.7, -0.4, 0.0, 0.0, 1)
}

/// `p3 = (0.6,-0.2,0,0,1)`.
pub fn p3_gains() -> DspGains {
    DspGains::new(0.6, -0.2, 0.0, 0.0, 1)
}

/// The nine standard controller parameterizations from the literature.
pub fn standard_controllers() -> Vec<(String, DspGains)> {
    let list = [
        DspGains::new(0.6, -0.2, 0.0, 0.0, 1),
        DspGains::new(0.7, -0.4, 0.0, 0.0, 1),
        DspGains::new(1.0 / 6.0, -1.0 / 3.0, 0.0, 0.0, 1),
        DspGains::new(1.0 / 6.0, 1.0 / 6.0, 0.0, 0.0, 1),
        DspGains::new(1.0, 0.0, 0.0, 0.0, 1),
        DspGains::new(2.0, -1.0, 0.0, -1.0, 1),
        DspGains::new(0.5, 0.5, 0.0, 0.5, 1),
        DspGains::new(1.0 / 18.0, 1.0 / 9.0, 1.0 / 18.0, 0.0, 1),
        DspGains::new(0.25, 0.25, 0.25, 0.0, 1),
    ];
    list.iter().map(|g| (g.to_string(), *g)).collect()
}
