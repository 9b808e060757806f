//! The PDRS splittings must reconstruct the plain ODE right-hand sides.
//!
//! Each oracle below is written straight from the ODE system, independent
//! of the production/destruction tables under test.

use mprk_bench::problems::{self, pr4_g, pr4_g_prime};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max)
        / scale
}

fn random_state(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

fn robertson_rhs(y: &[f64]) -> Vec<f64> {
    vec![
        1e4 * y[1] * y[2] - 0.04 * y[0],
        0.04 * y[0] - 1e4 * y[1] * y[2] - 3e7 * y[1] * y[1],
        3e7 * y[1] * y[1],
    ]
}

fn hires_rhs(y: &[f64]) -> Vec<f64> {
    vec![
        -1.71 * y[0] + 0.43 * y[1] + 8.32 * y[2] + 0.0007,
        1.71 * y[0] - 8.75 * y[1],
        -10.03 * y[2] + 0.43 * y[3] + 0.035 * y[4],
        8.32 * y[1] + 1.71 * y[2] - 1.12 * y[3],
        -1.745 * y[4] + 0.43 * y[5] + 0.43 * y[6],
        -280.0 * y[5] * y[7] + 0.69 * y[3] + 1.71 * y[4] - 0.43 * y[5] + 0.69 * y[6],
        280.0 * y[5] * y[7] - 1.81 * y[6],
        -280.0 * y[5] * y[7] + 1.81 * y[6],
    ]
}

fn npzd_rhs(y: &[f64]) -> Vec<f64> {
    let graze = y[0] * y[1] / (0.01 + y[0]);
    let prey = 0.5 * (1.0 - (-1.21 * y[1] * y[1]).exp()) * y[2];
    vec![
        0.01 * y[1] + 0.01 * y[2] + 0.003 * y[3] - graze,
        graze - 0.06 * y[1] - prey,
        prey - 0.03 * y[2],
        0.05 * y[1] + 0.02 * y[2] - 0.003 * y[3],
    ]
}

fn brusselator_rhs(y: &[f64]) -> Vec<f64> {
    vec![
        -y[0],
        -y[1] * y[4],
        y[1] * y[4],
        y[4],
        y[0] - y[1] * y[4] + y[4] * y[4] * y[5] - y[4],
        y[1] * y[4] - y[4] * y[4] * y[5],
    ]
}

fn pr4_lambda(xi: f64) -> [[f64; 4]; 4] {
    [
        [-1.0, 1.0 - xi, xi, 0.0],
        [xi, -1.0, 0.0, 1.0 - xi],
        [1.0 - xi, 0.0, -1.0, xi],
        [0.0, xi, 1.0 - xi, -1.0],
    ]
}

fn pr4_rhs(xi: f64, y: &[f64], t: f64) -> Vec<f64> {
    let lam = pr4_lambda(xi);
    let g = pr4_g(t);
    let gp = pr4_g_prime(t);
    (0..4)
        .map(|i| {
            (0..4).map(|j| lam[i][j] * (y[j] - g[j])).sum::<f64>() + gp[i]
        })
        .collect()
}

#[test]
fn robertson_split_reconstructs_rhs() {
    let bench = problems::make_robertson();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let y = random_state(&mut rng, 3, 1e-8, 2.0);
        let f = bench.problem.rhs(&y, 0.0).unwrap();
        assert!(rel_err(&f, &robertson_rhs(&y)) <= 1e-13);
    }
    // Sum of the right-hand side vanishes (conservative).
    let y = vec![0.3, 0.2, 0.5];
    let f = bench.problem.rhs(&y, 0.0).unwrap();
    assert!(f.iter().sum::<f64>().abs() <= 1e-9 * 3e7);
    // At the sanitized initial condition f ≈ (-0.04, 0.04, 0).
    let f0 = bench.problem.rhs(&bench.problem.y0, 0.0).unwrap();
    assert!((f0[0] + 0.04).abs() < 1e-12);
    assert!((f0[1] - 0.04).abs() < 1e-12);
    assert!(f0[2].abs() < 1e-12);
}

#[test]
fn robertson_metadata() {
    let bench = problems::make_robertson();
    let p = &bench.problem;
    assert_eq!(p.y0, vec![1.0, f64::MIN_POSITIVE, f64::MIN_POSITIVE]);
    assert_eq!((p.t0, p.t_end, p.dt0), (0.0, 1e8, 1e-6));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<(Vec<f64>, f64)> = (0..50)
        .map(|_| (random_state(&mut rng, 3, 1e-6, 1.5), 0.0))
        .collect();
    let (ok, viol) = p.check_conservative(&samples);
    assert!(ok);
    assert_eq!(viol, 0.0);
}

#[test]
fn hires_split_reconstructs_rhs() {
    let bench = problems::make_hires();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let y = random_state(&mut rng, 8, 1e-6, 1.5);
        let f = bench.problem.rhs(&y, 0.0).unwrap();
        assert!(rel_err(&f, &hires_rhs(&y)) <= 1e-13);
    }
}

#[test]
fn hires_metadata_and_rest_split() {
    let bench = problems::make_hires();
    let p = &bench.problem;
    let mut expect = vec![f64::MIN_POSITIVE; 8];
    expect[0] = 1.0;
    expect[7] = 0.0057;
    assert_eq!(p.y0, expect);
    assert_eq!((p.t_end, p.dt0), (321.8122, 0.5e-3));
    // PDS part is mirrored even though the rest terms break conservation.
    let y = vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];
    let mut tab = mprk_core::PdTables::new(8);
    p.eval_tables(&y, 0.0, &mut tab).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            assert_eq!(tab.p(i, j), tab.d(j, i));
        }
    }
    assert_eq!(tab.p(6, 7), 280.0 * y[5] * y[7]);
    assert_eq!(tab.d(7, 6), 280.0 * y[5] * y[7]);
    assert_eq!(tab.rp[0], 0.0007);
    assert_eq!(tab.rp[4], 0.43 * y[6]);
    assert_eq!(tab.rp[5], 0.69 * y[6]);
    assert_eq!(tab.rd[5], 280.0 * y[5] * y[7]);
}

#[test]
fn npzd_split_reconstructs_rhs() {
    let bench = problems::make_npzd();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let y = random_state(&mut rng, 4, 1e-6, 9.0);
        let f = bench.problem.rhs(&y, 0.0).unwrap();
        assert!(rel_err(&f, &npzd_rhs(&y)) <= 1e-13);
        assert!(f.iter().sum::<f64>().abs() <= 1e-13 * 10.0);
    }
    assert_eq!(bench.problem.y0, vec![8.0, 2.0, 1.0, 4.0]);
    assert_eq!((bench.problem.t_end, bench.problem.dt0), (5.0, 1.0));
}

#[test]
fn npzd_grazing_term_properties() {
    let bench = problems::make_npzd();
    let mut tab = mprk_core::PdTables::new(4);
    // p32 = 0.5 (1 - exp(-1.21 y2^2)) y3 is nonnegative and vanishes as
    // y2 -> 0.
    for y2 in [1e-8, 1e-3, 0.5, 2.0, 8.0] {
        let y = vec![1.0, y2, 3.0, 1.0];
        bench.problem.eval_tables(&y, 0.0, &mut tab).unwrap();
        let p32 = tab.p(2, 1);
        assert!(p32 >= 0.0);
        assert!((p32 - 0.5 * (1.0 - (-1.21 * y2 * y2).exp()) * 3.0).abs() < 1e-15);
    }
    let y = vec![1.0, 1e-12, 3.0, 1.0];
    bench.problem.eval_tables(&y, 0.0, &mut tab).unwrap();
    assert!(tab.p(2, 1) < 1e-20);
}

#[test]
fn brusselator_split_reconstructs_rhs() {
    let bench = problems::make_brusselator();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let y = random_state(&mut rng, 6, 1e-6, 10.0);
        let f = bench.problem.rhs(&y, 0.0).unwrap();
        assert!(rel_err(&f, &brusselator_rhs(&y)) <= 1e-13);
        let scale = f.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
        assert!(f.iter().sum::<f64>().abs() <= 1e-13 * scale);
    }
    let mut expect = vec![10.0, 10.0, f64::MIN_POSITIVE, f64::MIN_POSITIVE, 0.1, 0.1];
    assert_eq!(bench.problem.y0, expect.drain(..).collect::<Vec<_>>());
    assert_eq!((bench.problem.t_end, bench.problem.dt0), (10.0, 0.1));
}

#[test]
fn pr4_split_reconstructs_rhs_for_all_training_xis() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for xi in [0.1, 0.3, 0.4, 0.5] {
        let bench = problems::make_pr4(xi);
        for _ in 0..100 {
            let y = random_state(&mut rng, 4, 0.05, 3.5);
            let t = rng.gen_range(0.0..20.0 * std::f64::consts::PI);
            let f = bench.problem.rhs(&y, t).unwrap();
            let oracle = pr4_rhs(xi, &y, t);
            assert!(
                rel_err(&f, &oracle) <= 1e-12,
                "xi = {xi}, t = {t}: {f:?} vs {oracle:?}"
            );
        }
    }
}

#[test]
fn pr4_initial_data_and_symmetries() {
    let bench = problems::make_pr4(0.4);
    assert_eq!(bench.problem.y0, vec![2.0, 2.0, 1.0, 1.0]);
    assert_eq!(bench.problem.t_end, 20.0 * std::f64::consts::PI);
    assert_eq!(bench.problem.dt0, 1.0);
    // g1' = -g4' and g2' = -g3'.
    for t in [0.0, 0.7, 3.3, 17.9, 55.0] {
        let gp = pr4_g_prime(t);
        assert_eq!(gp[0], -gp[3]);
        assert_eq!(gp[1], -gp[2]);
    }
}

#[test]
fn pr4_g_prime_matches_finite_differences() {
    let h = 1e-6;
    for i in 0..200 {
        let t = 0.05 + i as f64 * 0.31;
        let fd: Vec<f64> = {
            let gp = pr4_g(t + h);
            let gm = pr4_g(t - h);
            (0..4).map(|k| (gp[k] - gm[k]) / (2.0 * h)).collect()
        };
        let an = pr4_g_prime(t);
        for k in 0..4 {
            let scale = an[k].abs().max(1.0);
            assert!(
                (fd[k] - an[k]).abs() <= 1e-6 * scale,
                "t = {t}, k = {k}: {} vs {}",
                fd[k],
                an[k]
            );
        }
    }
}

#[test]
fn pr4_lambda_is_metzler_with_zero_column_sums() {
    for i in 0..=10 {
        let xi = i as f64 * 0.05;
        let lam = pr4_lambda(xi);
        for j in 0..4 {
            let col: f64 = (0..4).map(|i| lam[i][j]).sum();
            assert!(col.abs() < 1e-15);
            for i in 0..4 {
                if i != j {
                    assert!(lam[i][j] >= 0.0);
                }
            }
        }
    }
}

#[test]
fn pr4_lambda_spectrum() {
    // Characteristic polynomial by Faddeev-LeVerrier, evaluated at the
    // claimed eigenvalues {0, -2, -1 ± (1 - 2ξ) i}.
    for i in 0..=10 {
        let xi = i as f64 * 0.05;
        let a = pr4_lambda(xi);
        let mul = |x: &[[f64; 4]; 4], y: &[[f64; 4]; 4]| {
            let mut z = [[0.0; 4]; 4];
            for r in 0..4 {
                for c in 0..4 {
                    z[r][c] = (0..4).map(|k| x[r][k] * y[k][c]).sum();
                }
            }
            z
        };
        let trace = |x: &[[f64; 4]; 4]| (0..4).map(|k| x[k][k]).sum::<f64>();
        let mut m = a;
        let mut coeffs = [1.0f64; 5]; // c4 λ^4 + ... + c0 with c4 = 1
        let mut cs = [0.0f64; 4];
        // Newton's identities: p_k traces of powers.
        let mut powers = Vec::new();
        powers.push(a);
        for _ in 1..4 {
            m = mul(&m, &a);
            powers.push(m);
        }
        let p: Vec<f64> = powers.iter().map(trace).collect();
        cs[0] = -p[0];
        cs[1] = -(p[1] + cs[0] * p[0]) / 2.0;
        cs[2] = -(p[2] + cs[0] * p[1] + cs[1] * p[0]) / 3.0;
        cs[3] = -(p[3] + cs[0] * p[2] + cs[1] * p[1] + cs[2] * p[0]) / 4.0;
        coeffs[1] = cs[0];
        coeffs[2] = cs[1];
        coeffs[3] = cs[2];
        coeffs[4] = cs[3];
        let eval = |lambda: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in coeffs {
                acc = acc * lambda + c;
            }
            acc
        };
        let omega = 1.0 - 2.0 * xi;
        for root in [
            Complex64::new(0.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(-1.0, omega),
            Complex64::new(-1.0, -omega),
        ] {
            let v = eval(root);
            assert!(v.norm() <= 1e-10, "xi = {xi}, root {root}: |p| = {}", v.norm());
        }
    }
}
