//! One MPRK step: stage systems, embedded result σ, final update.
//!
//! Each stage solves a linear system `M y = rhs` whose matrix couples the
//! unknowns through ratios `y_j / pwd_j` with strictly positive
//! Patankar-weight denominators (PWDs). For a valid PDRS the transpose of
//! `M` is an M-matrix, so the solution is positive for any `Δt ≥ 0`; the
//! step nevertheless re-checks positivity and finiteness and reports any
//! violation as a step failure, which the adaptive driver converts into a
//! rejection with halved step size.

use crate::error::StepError;
use crate::linalg::{solve_in_place, DenseMat};
use crate::pdrs::{PdTables, PdrsProblem};
use crate::scheme::MprkScheme;

/// Result of one step from `(y_n, t_n)` with step size `dt`.
#[derive(Debug, Clone)]
pub struct StepOutput {
    /// Order-k result.
    pub y_next: Vec<f64>,
    /// Embedded order-(k-1) result.
    pub sigma: Vec<f64>,
    /// Stage vectors `y^(1), ..., y^(s)`.
    pub stages: Vec<Vec<f64>>,
}

/// `a^u * b^(1-u)` for positive `a`, `b`.
///
/// Mid-range arguments use direct powers (best accuracy); arguments near
/// the under/overflow boundary go through log space, which keeps
/// realmin-scale components finite where `a.powf(2.0)` would flush to zero.
#[inline]
pub fn pow_interp(a: f64, b: f64, u: f64) -> f64 {
    if a == b || u == 1.0 {
        return a;
    }
    let mid = |v: f64| (1e-100..=1e100).contains(&v);
    if mid(a) && mid(b) {
        a.powf(u) * b.powf(1.0 - u)
    } else {
        (u * a.ln() + (1.0 - u) * b.ln()).exp()
    }
}

fn pow_vec(a: &[f64], b: &[f64], u: f64) -> Result<Vec<f64>, StepError> {
    let mut out = Vec::with_capacity(a.len());
    for (index, (&ai, &bi)) in a.iter().zip(b).enumerate() {
        let v = pow_interp(ai, bi, u);
        if !(v > 0.0) || !v.is_finite() {
            return Err(StepError::NonPositiveWeight { index });
        }
        out.push(v);
    }
    Ok(out)
}

/// Accumulate `Σ w_ν * tables_ν` into a single table.
fn accumulate<'a>(
    n: usize,
    parts: impl IntoIterator<Item = (f64, &'a PdTables)>,
) -> PdTables {
    let mut acc = PdTables::new(n);
    for (w, t) in parts {
        if w == 0.0 {
            continue;
        }
        for i in 0..n {
            acc.rp[i] += w * t.rp[i];
            acc.rd[i] += w * t.rd[i];
            for j in 0..n {
                acc.set_p(i, j, acc.p(i, j) + w * t.p(i, j));
                acc.set_d(i, j, acc.d(i, j) + w * t.d(i, j));
            }
        }
    }
    acc
}

/// Build the linear system for one implicit update.
///
/// `weighted` holds the already weight-combined term tables; `pwd` the
/// strictly positive denominators of the unknowns. Diagonal production
/// entries (possible for max/min-split right-hand sides) are folded into
/// the diagonal of `M`.
pub fn assemble_system(
    y_n: &[f64],
    dt: f64,
    weighted: &PdTables,
    pwd: &[f64],
) -> Result<(DenseMat, Vec<f64>), StepError> {
    let n = y_n.len();
    for (index, &w) in pwd.iter().enumerate() {
        if !(w > 0.0) || !w.is_finite() {
            return Err(StepError::NonPositiveWeight { index });
        }
    }
    let mut m = DenseMat::zeros(n);
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let mut dest = weighted.rd[i];
        for j in 0..n {
            dest += weighted.d(i, j);
            if j != i {
                m[(i, j)] = -dt * weighted.p(i, j) / pwd[j];
            }
        }
        m[(i, i)] = 1.0 + dt * (dest - weighted.p(i, i)) / pwd[i];
        rhs[i] = y_n[i] + dt * weighted.rp[i];
    }
    Ok((m, rhs))
}

fn solve_positive(m: DenseMat, rhs: &[f64]) -> Result<Vec<f64>, StepError> {
    let x = solve_in_place(m, rhs)?;
    for (index, &v) in x.iter().enumerate() {
        if !(v > 0.0) || !v.is_finite() {
            return Err(StepError::NonPositiveState { index });
        }
    }
    Ok(x)
}

/// Advance one step of the given scheme.
pub fn mprk_step(
    problem: &PdrsProblem,
    scheme: &MprkScheme,
    y_n: &[f64],
    t_n: f64,
    dt: f64,
) -> Result<StepOutput, StepError> {
    debug_assert!(dt >= 0.0);
    let n = problem.dim;
    for (index, &v) in y_n.iter().enumerate() {
        if !(v > 0.0) || !v.is_finite() {
            return Err(StepError::NonPositiveState { index });
        }
    }
    let tab = &scheme.tableau;
    let s = tab.s;

    let mut stages: Vec<Vec<f64>> = Vec::with_capacity(s);
    let mut tables: Vec<PdTables> = Vec::with_capacity(s);
    stages.push(y_n.to_vec());
    let mut t0 = PdTables::new(n);
    problem.eval_tables(y_n, t_n, &mut t0)?;
    tables.push(t0);

    for k in 1..s {
        let pwd = if k == 1 {
            y_n.to_vec()
        } else {
            pow_vec(&stages[1], y_n, 1.0 / scheme.p)?
        };
        let weighted = accumulate(n, (0..k).map(|nu| (tab.a(k, nu), &tables[nu])));
        let (m, rhs) = assemble_system(y_n, dt, &weighted, &pwd)?;
        let y_k = solve_positive(m, &rhs)?;
        let mut tk = PdTables::new(n);
        problem.eval_tables(&y_k, t_n + tab.c[k] * dt, &mut tk)?;
        stages.push(y_k);
        tables.push(tk);
    }

    // Embedded result. For two-stage schemes it is the plain power formula;
    // the third-order families solve one extra system that reuses the stage
    // term tables, so no additional right-hand side evaluations occur.
    let sigma = if s == 2 {
        pow_vec(&stages[1], y_n, 1.0 / scheme.q)?
    } else {
        let pwd = pow_vec(&stages[1], y_n, 1.0 / scheme.q)?;
        let weighted = accumulate(
            n,
            [(scheme.beta1, &tables[0]), (scheme.beta2, &tables[1])],
        );
        let (m, rhs) = assemble_system(y_n, dt, &weighted, &pwd)?;
        solve_positive(m, &rhs)?
    };

    let weighted = accumulate(n, (0..s).map(|k| (tab.b[k], &tables[k])));
    let (m, rhs) = assemble_system(y_n, dt, &weighted, &sigma)?;
    let y_next = solve_positive(m, &rhs)?;

    Ok(StepOutput {
        y_next,
        sigma,
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdrs::PdrsProblem;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn exchange() -> PdrsProblem {
        PdrsProblem::new(
            "exchange",
            2,
            &[0.9, 0.1],
            0.0,
            10.0,
            0.5,
            true,
            Arc::new(|y: &[f64], _t: f64, tab: &mut PdTables| {
                tab.set_p(0, 1, y[1]);
                tab.set_p(1, 0, y[0]);
                tab.mirror_conservative();
            }),
        )
        .unwrap()
    }

    /// Random conservative autonomous PDS with bounded rates.
    fn random_pds(n: usize, seed: u64) -> PdrsProblem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rates: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>()).collect();
        let y0: Vec<f64> = (0..n).map(|_| 0.1 + rng.gen::<f64>()).collect();
        PdrsProblem::new(
            "random-pds",
            n,
            &y0,
            0.0,
            1.0,
            0.1,
            true,
            Arc::new(move |y: &[f64], _t: f64, tab: &mut PdTables| {
                let n = y.len();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            tab.set_p(i, j, rates[i * n + j] * y[j]);
                        }
                    }
                }
                tab.mirror_conservative();
            }),
        )
        .unwrap()
    }

    #[test]
    fn pow_interp_identities() {
        assert_eq!(pow_interp(0.7, 0.9, 1.0), 0.7);
        assert_eq!(pow_interp(0.9, 0.9, 2.0), 0.9);
        let tiny = f64::MIN_POSITIVE;
        let v = pow_interp(tiny, 2.0 * tiny, 2.0);
        assert!(v > 0.0 && v.is_finite(), "log-space path must survive: {v}");
        let direct = pow_interp(0.3, 0.8, 2.0);
        assert!((direct - 0.3f64.powi(2) / 0.8).abs() < 1e-15);
    }

    #[test]
    fn assemble_zero_dt_gives_identity() {
        let prob = exchange();
        let y = [0.9, 0.1];
        let mut tab = PdTables::new(2);
        prob.eval_tables(&y, 0.0, &mut tab).unwrap();
        let (m, rhs) = assemble_system(&y, 0.0, &tab, &y).unwrap();
        assert_eq!(m, DenseMat::identity(2));
        assert_eq!(rhs, vec![0.9, 0.1]);
    }

    #[test]
    fn assemble_matches_hand_computed_stage_system() {
        // MPRK22(1) stage 2 on the exchange problem: weights a21 = 1,
        // pwd = y_n, dt = 0.5.
        let prob = exchange();
        let y = [0.9, 0.1];
        let mut tab = PdTables::new(2);
        prob.eval_tables(&y, 0.0, &mut tab).unwrap();
        let (m, rhs) = assemble_system(&y, 0.5, &tab, &y).unwrap();
        assert!((m[(0, 0)] - 1.5).abs() < 1e-15);
        assert!((m[(0, 1)] + 0.5).abs() < 1e-15);
        assert!((m[(1, 0)] + 0.5).abs() < 1e-15);
        assert!((m[(1, 1)] - 1.5).abs() < 1e-15);
        assert_eq!(rhs, vec![0.9, 0.1]);
    }

    #[test]
    fn assemble_rejects_nonpositive_weight() {
        let tab = PdTables::new(2);
        let r = assemble_system(&[1.0, 1.0], 0.1, &tab, &[1.0, 0.0]);
        assert!(matches!(r, Err(StepError::NonPositiveWeight { index: 1 })));
    }

    #[test]
    fn golden_mprk22_step_on_exchange() {
        let prob = exchange();
        let scheme = MprkScheme::mprk22(1.0).unwrap();
        let out = mprk_step(&prob, &scheme, &[0.9, 0.1], 0.0, 0.5).unwrap();
        assert!((out.stages[1][0] - 0.7).abs() < 1e-12);
        assert!((out.stages[1][1] - 0.3).abs() < 1e-12);
        assert!((out.sigma[0] - 0.7).abs() < 1e-12);
        assert!((out.sigma[1] - 0.3).abs() < 1e-12);
        assert!((out.y_next[0] - 0.6475).abs() < 1e-12);
        assert!((out.y_next[1] - 0.3525).abs() < 1e-12);
        // Exact solution 0.5 + 0.4 e^{-1} confirms O(dt^2) proximity.
        let exact = 0.5 + 0.4 * (-1.0f64).exp();
        assert!((out.y_next[0] - exact).abs() < 5e-3);
    }

    #[test]
    fn zero_dt_is_identity_step() {
        let prob = exchange();
        for scheme in [
            MprkScheme::mprk22(1.0).unwrap(),
            MprkScheme::mprk43_alpha_beta(0.5, 0.75).unwrap(),
            MprkScheme::mprk43_gamma(0.563).unwrap(),
        ] {
            let out = mprk_step(&prob, &scheme, &[0.9, 0.1], 0.0, 0.0).unwrap();
            assert_eq!(out.y_next, vec![0.9, 0.1]);
            assert_eq!(out.sigma, vec![0.9, 0.1]);
        }
    }

    #[test]
    fn conservation_per_step() {
        for seed in 0..20 {
            let prob = random_pds(4, seed);
            let sum0: f64 = prob.y0.iter().sum();
            for scheme in [
                MprkScheme::mprk22(1.0).unwrap(),
                MprkScheme::mprk43_alpha_beta(0.5, 0.75).unwrap(),
                MprkScheme::mprk43_gamma(0.563).unwrap(),
            ] {
                let out = mprk_step(&prob, &scheme, &prob.y0, 0.0, 0.7).unwrap();
                let sum1: f64 = out.y_next.iter().sum();
                assert!(
                    (sum1 - sum0).abs() <= 1e-12 * sum0,
                    "seed {seed} {}: {sum0} -> {sum1}",
                    scheme.label()
                );
            }
        }
    }

    #[test]
    fn unconditional_positivity_over_extreme_step_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for seed in 0..10 {
            let prob = random_pds(3, 100 + seed);
            for scheme in [
                MprkScheme::mprk22(1.0).unwrap(),
                MprkScheme::mprk43_alpha_beta(0.5, 0.75).unwrap(),
                MprkScheme::mprk43_gamma(0.563).unwrap(),
            ] {
                for _ in 0..20 {
                    let dt = 10f64.powf(rng.gen_range(-8.0..6.0));
                    let out = mprk_step(&prob, &scheme, &prob.y0, 0.0, dt).unwrap();
                    assert!(out.y_next.iter().all(|v| *v > 0.0), "dt = {dt}");
                    assert!(out.sigma.iter().all(|v| *v > 0.0), "dt = {dt}");
                    for st in &out.stages {
                        assert!(st.iter().all(|v| *v > 0.0), "dt = {dt}");
                    }
                }
            }
        }
    }

    #[test]
    fn order_of_convergence_on_exchange() {
        // Exact solution y1(t) = 0.5 + 0.4 exp(-2t).
        let prob = exchange();
        let t_end = 1.0;
        let exact = |t: f64| {
            let d = 0.4 * (-2.0 * t).exp();
            [0.5 + d, 0.5 - d]
        };
        for (scheme, k) in [
            (MprkScheme::mprk22(1.0).unwrap(), 2.0),
            (MprkScheme::mprk43_alpha_beta(0.5, 0.75).unwrap(), 3.0),
            (MprkScheme::mprk43_gamma(0.563).unwrap(), 3.0),
        ] {
            let mut errs = Vec::new();
            let mut errs_sigma = Vec::new();
            for j in 3..=7 {
                let n: u64 = 1 << j;
                let dt = t_end / n as f64;
                let mut y = vec![0.9, 0.1];
                let mut ys = vec![0.9, 0.1];
                for i in 0..n {
                    let t = i as f64 * dt;
                    y = mprk_step(&prob, &scheme, &y, t, dt).unwrap().y_next;
                    ys = mprk_step(&prob, &scheme, &ys, t, dt).unwrap().sigma;
                }
                let ex = exact(t_end);
                errs.push(((y[0] - ex[0]).powi(2) + (y[1] - ex[1]).powi(2)).sqrt());
                errs_sigma
                    .push(((ys[0] - ex[0]).powi(2) + (ys[1] - ex[1]).powi(2)).sqrt());
            }
            let slope = |e: &[f64]| {
                let m = e.len() - 1;
                (e[0].ln() - e[m].ln()) / ((m as f64) * std::f64::consts::LN_2)
            };
            let sl = slope(&errs);
            let sl_sigma = slope(&errs_sigma);
            assert!((sl - k).abs() < 0.3, "{}: slope {sl}", scheme.label());
            assert!(
                (sl_sigma - (k - 1.0)).abs() < 0.3,
                "{}: embedded slope {sl_sigma}",
                scheme.label()
            );
        }
    }

    #[test]
    fn eval_error_propagates_component_and_time() {
        let prob = PdrsProblem::new(
            "nan-at-two",
            1,
            &[1.0],
            0.0,
            10.0,
            0.1,
            false,
            Arc::new(|_y: &[f64], t: f64, tab: &mut PdTables| {
                tab.rp[0] = if t > 1.0 { f64::NAN } else { 1.0 };
            }),
        )
        .unwrap();
        let scheme = MprkScheme::mprk22(1.0).unwrap();
        assert!(mprk_step(&prob, &scheme, &[1.0], 0.0, 0.5).is_ok());
        assert!(matches!(
            mprk_step(&prob, &scheme, &[1.0], 2.0, 0.5),
            Err(StepError::Eval(_))
        ));
    }
}
