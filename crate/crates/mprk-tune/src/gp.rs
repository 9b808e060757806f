//! Gaussian-process interpolation with a Matérn-5/2 ARD kernel.
//!
//! Targets are standardized internally; the nugget is `1e-10` relative to
//! the signal variance, so the posterior variance at training points stays
//! below `2 * jitter * signal_variance` for any fitted scale.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lhs::latin_hypercube;
use crate::neldermead;
use crate::TuneError;

pub const JITTER: f64 = 1e-10;
pub const LS_BOUNDS: (f64, f64) = (0.05, 10.0);
pub const SV_BOUNDS: (f64, f64) = (1e-4, 1e4);

#[derive(Debug, Clone)]
pub struct Hyper {
    /// Per-dimension length scales (encoded units).
    pub length_scales: Vec<f64>,
    pub signal_variance: f64,
}

/// Fitted GP over encoded inputs.
#[derive(Debug, Clone)]
pub struct GpModel {
    x: Vec<Vec<f64>>,
    y_raw: Vec<f64>,
    y_mean: f64,
    y_std: f64,
    hyper: Hyper,
    /// Lower-triangular Cholesky factor of `sv * (R + jitter I)`, row-major.
    chol: Vec<f64>,
    /// `K^-1 y` in standardized units.
    alpha: Vec<f64>,
}

fn matern52(ls: &[f64], sv: f64, a: &[f64], b: &[f64]) -> f64 {
    let mut r2 = 0.0;
    for ((&ai, &bi), &l) in a.iter().zip(b).zip(ls) {
        let d = (ai - bi) / l;
        r2 += d * d;
    }
    let r = r2.sqrt();
    let s5 = 5f64.sqrt() * r;
    sv * (1.0 + s5 + 5.0 * r2 / 3.0) * (-s5).exp()
}

/// In-place Cholesky of a row-major symmetric matrix.
fn cholesky(a: &mut [f64], n: usize) -> Result<(), TuneError> {
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= a[i * n + k] * a[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(TuneError::Factorization { pivot: sum });
                }
                a[i * n + i] = sum.sqrt();
            } else {
                a[i * n + j] = sum / a[j * n + j];
            }
        }
        for j in i + 1..n {
            a[i * n + j] = 0.0;
        }
    }
    Ok(())
}

fn solve_lower(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

fn solve_upper_t(l: &[f64], n: usize, b: &mut [f64]) {
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

fn build_cov(x: &[Vec<f64>], hyper: &Hyper) -> Vec<f64> {
    let n = x.len();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = matern52(&hyper.length_scales, hyper.signal_variance, &x[i], &x[j]);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
        k[i * n + i] += JITTER * hyper.signal_variance;
    }
    k
}

/// Negative log marginal likelihood of standardized targets.
fn neg_log_ml(x: &[Vec<f64>], y_std: &[f64], hyper: &Hyper) -> f64 {
    let n = x.len();
    let mut k = build_cov(x, hyper);
    if cholesky(&mut k, n).is_err() {
        return f64::INFINITY;
    }
    let mut alpha = y_std.to_vec();
    solve_lower(&k, n, &mut alpha);
    let quad: f64 = alpha.iter().map(|v| v * v).sum();
    let logdet: f64 = (0..n).map(|i| k[i * n + i].ln()).sum::<f64>() * 2.0;
    0.5 * quad + 0.5 * logdet + 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln()
}

impl GpModel {
    /// Fit hyperparameters by maximizing the marginal likelihood with a
    /// multi-start bounded search, then factorize.
    pub fn fit(x: Vec<Vec<f64>>, y: Vec<f64>, seed: u64, restarts: usize) -> Result<Self, TuneError> {
        let n = x.len();
        if n < 2 {
            return Err(TuneError::NotEnoughData { needed: 2, got: n });
        }
        for i in 0..n {
            for j in i + 1..n {
                let same = x[i]
                    .iter()
                    .zip(&x[j])
                    .all(|(a, b)| (a - b).abs() <= 1e-12);
                if same && (y[i] - y[j]).abs() > 1e-9 {
                    return Err(TuneError::ConflictingDuplicates { a: i, b: j });
                }
            }
        }
        let dim = x[0].len();
        let y_mean = y.iter().sum::<f64>() / n as f64;
        let var = y.iter().map(|v| (v - y_mean).powi(2)).sum::<f64>() / n as f64;
        let y_std_scale = var.sqrt().max(1e-12);
        let y_std: Vec<f64> = y.iter().map(|v| (v - y_mean) / y_std_scale).collect();

        // Search in log space; clamp into bounds inside the objective.
        let clamp_hyper = |p: &[f64]| -> Hyper {
            let ls: Vec<f64> = (0..dim)
                .map(|d| p[d].exp().clamp(LS_BOUNDS.0, LS_BOUNDS.1))
                .collect();
            let sv = p[dim].exp().clamp(SV_BOUNDS.0, SV_BOUNDS.1);
            Hyper {
                length_scales: ls,
                signal_variance: sv,
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let lo = [LS_BOUNDS.0.ln(), SV_BOUNDS.0.ln()];
        let hi = [LS_BOUNDS.1.ln(), SV_BOUNDS.1.ln()];
        let starts = latin_hypercube(restarts.max(1), dim + 1, &mut rng);
        let mut best: Option<(Vec<f64>, f64)> = None;
        for s in starts {
            let x0: Vec<f64> = (0..=dim)
                .map(|d| {
                    let (l, h) = if d < dim { (lo[0], hi[0]) } else { (lo[1], hi[1]) };
                    l + s[d.min(dim)] * (h - l)
                })
                .collect();
            let (p, fp) = neldermead::minimize(
                |p| neg_log_ml(&x, &y_std, &clamp_hyper(p)),
                &x0,
                0.4,
                120,
            );
            if best.as_ref().map_or(true, |(_, fb)| fp < *fb) {
                best = Some((p, fp));
            }
        }
        let hyper = clamp_hyper(&best.expect("at least one restart").0);
        Self::with_hyper(x, y, y_mean, y_std_scale, hyper)
    }

    /// Factorize with given hyperparameters (used when new data arrives
    /// between refits).
    pub fn refit_data(&self, x: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self, TuneError> {
        let n = y.len();
        let y_mean = y.iter().sum::<f64>() / n as f64;
        let var = y.iter().map(|v| (v - y_mean).powi(2)).sum::<f64>() / n as f64;
        Self::with_hyper(x, y, y_mean, var.sqrt().max(1e-12), self.hyper.clone())
    }

    fn with_hyper(
        x: Vec<Vec<f64>>,
        y_raw: Vec<f64>,
        y_mean: f64,
        y_std: f64,
        hyper: Hyper,
    ) -> Result<Self, TuneError> {
        let n = x.len();
        let mut chol = build_cov(&x, &hyper);
        cholesky(&mut chol, n)?;
        let mut alpha: Vec<f64> = y_raw.iter().map(|v| (v - y_mean) / y_std).collect();
        solve_lower(&chol, n, &mut alpha);
        solve_upper_t(&chol, n, &mut alpha);
        Ok(Self {
            x,
            y_raw,
            y_mean,
            y_std,
            hyper,
            chol,
            alpha,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn hyper(&self) -> &Hyper {
        &self.hyper
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn targets(&self) -> &[f64] {
        &self.y_raw
    }

    /// Posterior mean and standard deviation in raw target units.
    pub fn predict(&self, q: &[f64]) -> (f64, f64) {
        let n = self.x.len();
        let kstar: Vec<f64> = self
            .x
            .iter()
            .map(|xi| matern52(&self.hyper.length_scales, self.hyper.signal_variance, xi, q))
            .collect();
        let mean_std: f64 = kstar.iter().zip(&self.alpha).map(|(a, b)| a * b).sum();
        let mut v = kstar;
        solve_lower(&self.chol, n, &mut v);
        let explained: f64 = v.iter().map(|z| z * z).sum();
        let prior = self.hyper.signal_variance * (1.0 + JITTER);
        let var_std = (prior - explained).max(0.0);
        (
            self.y_mean + self.y_std * mean_std,
            self.y_std * var_std.sqrt(),
        )
    }

    /// Max |posterior mean - target| over the training set (raw units).
    pub fn interpolation_residual(&self) -> f64 {
        self.x
            .iter()
            .zip(&self.y_raw)
            .map(|(xi, yi)| (self.predict(xi).0 - yi).abs())
            .fold(0.0, f64::max)
    }
}
