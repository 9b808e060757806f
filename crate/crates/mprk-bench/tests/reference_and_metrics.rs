//! Reference cache, dense Hermite evaluation and error metrics.

use std::fs;
use std::sync::Arc;

use mprk_bench::problems::{self, make_robertson};
use mprk_bench::reference::{
    eval_reference, generate_reference, CacheStatus, RefTrajectory, ReferenceSolution,
    ReferenceStore,
};
use mprk_bench::{l2err_rel, metrics};
use mprk_core::{integrate_adaptive, AdaptiveOptions, DspGains, MprkScheme};

fn cubic(t: f64) -> f64 {
    t * t * t - 2.0 * t * t + 3.0 * t + 1.0
}

fn cubic_d(t: f64) -> f64 {
    3.0 * t * t - 4.0 * t + 3.0
}

fn synthetic_trajectory(times: Vec<f64>, f: impl Fn(f64) -> f64, fd: impl Fn(f64) -> f64) -> ReferenceSolution {
    let states = times.iter().map(|&t| vec![f(t)]).collect();
    let derivs = times.iter().map(|&t| vec![fd(t)]).collect();
    ReferenceSolution::Trajectory(Arc::new(RefTrajectory {
        problem: "synthetic".into(),
        ref_tol: 0.0,
        dim: 1,
        times,
        states,
        derivs,
    }))
}

#[test]
fn pr4_reference_is_analytic() {
    let bench = problems::make_pr4(0.4);
    let store = ReferenceStore::new(std::env::temp_dir());
    let (reference, status) = store.get_or_generate(&bench, 1e-12).unwrap();
    assert_eq!(status, CacheStatus::Analytic);
    let y = eval_reference(&reference, 0.0).unwrap();
    assert_eq!(y, vec![2.0, 2.0, 1.0, 1.0]);
}

#[test]
fn hermite_is_exact_at_nodes_and_for_cubics() {
    let times = vec![0.0, 0.4, 1.1, 1.7, 2.9];
    let reference = synthetic_trajectory(times.clone(), cubic, cubic_d);
    for &t in &times {
        let v = eval_reference(&reference, t).unwrap();
        assert_eq!(v[0], cubic(t), "stored node must be returned verbatim");
    }
    for w in times.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let v = eval_reference(&reference, mid).unwrap();
        assert!(
            (v[0] - cubic(mid)).abs() <= 1e-14 * cubic(mid).abs().max(1.0),
            "cubic must be reproduced at {mid}"
        );
    }
}

#[test]
fn hermite_reproduces_linear_trajectories_everywhere() {
    let f = |t: f64| 0.7 + 2.5 * t;
    let reference = synthetic_trajectory(vec![0.0, 1.0, 4.0], f, |_| 2.5);
    for i in 0..100 {
        let t = i as f64 * 0.04;
        let v = eval_reference(&reference, t).unwrap();
        assert!((v[0] - f(t)).abs() <= 1e-14 * f(t).abs());
    }
}

#[test]
fn out_of_domain_is_rejected() {
    let reference = synthetic_trajectory(vec![0.0, 1.0], |_| 1.0, |_| 0.0);
    assert!(eval_reference(&reference, -0.1).is_err());
    assert!(eval_reference(&reference, 1.0 + 1e-12).is_err());
    assert!(eval_reference(&reference, 1.0).is_ok());
}

#[test]
fn cache_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let store = ReferenceStore::new(dir.path());
    let bench = make_robertson();
    // Coarse tolerance keeps this test fast; the binary format is the same.
    let (ref1, status1) = store.get_or_generate(&bench, 1e-6).unwrap();
    let path = match status1 {
        CacheStatus::Generated(p) => p,
        other => panic!("expected generation, got {other:?}"),
    };
    let bytes1 = fs::read(&path).unwrap();
    let (ref2, status2) = store.get_or_generate(&bench, 1e-6).unwrap();
    assert_eq!(status2, CacheStatus::Hit(path.clone()));
    let (t1, t2) = match (&ref1, &ref2) {
        (ReferenceSolution::Trajectory(a), ReferenceSolution::Trajectory(b)) => (a, b),
        _ => panic!("expected trajectories"),
    };
    assert_eq!(t1.as_ref(), t2.as_ref(), "loaded trajectory must match generated");
    assert_eq!(bytes1, fs::read(&path).unwrap(), "cache hit must not rewrite");
    assert!(path.with_extension("ref.txt").is_file(), "sidecar missing");
    // A different tolerance is a distinct key.
    let other = store.path_for(&bench.problem.name, 1e-5);
    assert_ne!(other, path);
}

#[test]
fn robertson_reference_conserves_mass_to_the_end() {
    let bench = make_robertson();
    let traj = generate_reference(&bench, 1e-9).unwrap();
    assert_eq!(traj.t_end(), 1e8);
    let total0: f64 = traj.states[0].iter().sum();
    let total: f64 = traj.states.last().unwrap().iter().sum();
    assert!(((total - total0) / total0).abs() <= 1e-10);
}

#[test]
fn l2err_zero_for_exact_states() {
    let f = |t: f64| 1.0 + t;
    let reference = synthetic_trajectory(vec![0.0, 0.5, 1.0, 2.0], f, |_| 1.0);
    let times = vec![0.0, 0.25, 1.5, 2.0];
    let states: Vec<Vec<f64>> = times.iter().map(|&t| vec![f(t)]).collect();
    assert_eq!(l2err_rel(&times, &states, &reference).unwrap(), 0.0);
}

#[test]
fn l2err_single_interval_example() {
    // Single interval of length 1, nodal errors (1, 0), reference norms
    // (2, 2): sqrt((1/2)/(1/2 * 8)) = sqrt(1/8).
    let reference = ReferenceSolution::Analytic {
        eval: Arc::new(|_| vec![2.0]),
        t0: 0.0,
        t_end: 1.0,
        dim: 1,
    };
    let e = l2err_rel(&[0.0, 1.0], &[vec![1.0], vec![2.0]], &reference).unwrap();
    assert!((e - 0.125f64.sqrt()).abs() < 1e-15);
}

#[test]
fn l2err_is_invariant_under_joint_scaling() {
    let c = 3.7e4;
    let base = |t: f64| vec![1.0 + t, 2.0 - 0.3 * t];
    let ref1 = ReferenceSolution::Analytic {
        eval: Arc::new(base),
        t0: 0.0,
        t_end: 2.0,
        dim: 2,
    };
    let ref2 = ReferenceSolution::Analytic {
        eval: Arc::new(move |t| base(t).iter().map(|v| c * v).collect()),
        t0: 0.0,
        t_end: 2.0,
        dim: 2,
    };
    let times = vec![0.0, 0.7, 1.3, 2.0];
    let states: Vec<Vec<f64>> = times
        .iter()
        .map(|&t| vec![1.05 + t, 1.9 - 0.3 * t])
        .collect();
    let scaled: Vec<Vec<f64>> = states
        .iter()
        .map(|y| y.iter().map(|v| c * v).collect())
        .collect();
    let e1 = l2err_rel(&times, &states, &ref1).unwrap();
    let e2 = l2err_rel(&times, &scaled, &ref2).unwrap();
    assert!((e1 - e2).abs() <= 1e-12 * e1);
}

#[test]
fn err_returns_nan_without_accepted_steps() {
    // On a constant solution the error estimate is zero, which a negative
    // beta1 turns into an endless rejection loop: reject-ratio abort with
    // zero accepted steps.
    let problem = mprk_core::PdrsProblem::new(
        "still",
        1,
        &[1.0],
        0.0,
        10.0,
        1.0,
        true,
        Arc::new(|_y: &[f64], _t: f64, _tab: &mut mprk_core::PdTables| {}),
    )
    .unwrap();
    let reference = ReferenceSolution::Analytic {
        eval: Arc::new(|_| vec![1.0]),
        t0: 0.0,
        t_end: 10.0,
        dim: 1,
    };
    let scheme = MprkScheme::mprk22(1.0).unwrap();
    let gains = DspGains::new(-5.0, 0.0, 0.0, 0.0, 1);
    let report = integrate_adaptive(&problem, &scheme, &gains, 1e-6, &AdaptiveOptions::default());
    assert_eq!(report.k(), 0);
    assert!(report.aborted.is_some());
    assert!(metrics::err(&report, &reference).is_nan());
}

#[test]
fn robertson_run_with_p1_controller_completes() {
    let bench = make_robertson();
    let scheme = MprkScheme::mprk22(1.0).unwrap();
    let gains = DspGains::new(2.0, -1.0, 0.0, -1.0, 1);
    let report = integrate_adaptive(
        &bench.problem,
        &scheme,
        &gains,
        1e-3,
        &AdaptiveOptions::default(),
    );
    assert!(report.aborted.is_none(), "{:?}", report.aborted);
    assert_eq!(report.final_time(), 1e8);
    let total0: f64 = bench.problem.y0.iter().sum();
    for y in &report.states {
        assert!(y.iter().all(|v| *v > 0.0));
    }
    let total: f64 = report.final_state().iter().sum();
    assert!(((total - total0) / total0).abs() <= 1e-10);
}
