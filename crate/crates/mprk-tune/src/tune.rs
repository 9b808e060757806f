//! Two-phase Bayesian optimization loop over controller gains.

use std::collections::HashMap;

use mprk_core::{AdaptiveOptions, DspGains, MprkScheme};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use mprk_bench::{cost_on_suite, Benchmark, CostConfig, ReferenceSolution};

use crate::acquisition::{expected_improvement, prob_improvement};
use crate::domain::{SearchDomain, ENC_DIM};
use crate::gp::GpModel;
use crate::lhs::latin_hypercube;
use crate::neldermead;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Init,
    ExpectedImprovement,
    ProbabilityOfImprovement,
}

#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub index: usize,
    pub gains: DspGains,
    pub cost: f64,
    pub phase: Phase,
    /// Best cost seen up to and including this entry.
    pub incumbent_cost: f64,
}

#[derive(Debug, Clone)]
pub struct TuneTrace {
    pub entries: Vec<TraceEntry>,
    pub best_gains: DspGains,
    pub best_cost: f64,
    /// Interpolation residual of the last surrogate refit (raw units).
    pub last_gp_residual: f64,
}

#[derive(Debug, Clone)]
pub struct TuneConfig {
    pub domain: SearchDomain,
    pub n_init: usize,
    pub n_ei: usize,
    pub n_pi: usize,
    pub seed: u64,
    /// Probability of replacing a proposal with a uniform random point.
    pub explore_prob: f64,
    pub xi_pi: f64,
    /// Full hyperparameter refits happen every this many new points.
    pub refit_every: usize,
    pub gp_restarts: usize,
    pub acq_seeds: usize,
    pub nm_refine: usize,
    /// Minimum encoded l-inf separation between training inputs.
    pub min_separation: f64,
}

impl Default for TuneConfig {
    fn default() -> Self {
        Self {
            domain: SearchDomain::default(),
            n_init: 10,
            n_ei: 100,
            n_pi: 100,
            seed: 0,
            explore_prob: 0.05,
            xi_pi: 1e-3,
            refit_every: 10,
            gp_restarts: 8,
            acq_seeds: 256,
            nm_refine: 4,
            min_separation: 0.02,
        }
    }
}

/// Halton sequence point (bases 2, 3, 5, 7) for quasi-random seeding.
fn halton(index: usize, dim: usize) -> Vec<f64> {
    const PRIMES: [usize; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    (0..dim)
        .map(|d| {
            let base = PRIMES[d % PRIMES.len()];
            let mut f = 1.0;
            let mut r = 0.0;
            let mut i = index + 1;
            while i > 0 {
                f /= base as f64;
                r += f * (i % base) as f64;
                i /= base;
            }
            r
        })
        .collect()
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

struct Proposer<'a> {
    cfg: &'a TuneConfig,
    model: &'a GpModel,
    incumbent: f64,
    phase: Phase,
}

impl Proposer<'_> {
    fn acquisition(&self, q: &[f64]) -> (f64, f64) {
        let (mu, sd) = self.model.predict(q);
        let a = match self.phase {
            Phase::ProbabilityOfImprovement => {
                prob_improvement(mu, sd, self.incumbent, self.cfg.xi_pi)
            }
            _ => expected_improvement(mu, sd, self.incumbent),
        };
        (a, mu)
    }

    /// Maximize the acquisition per κ2 category: quasi-random seeding plus
    /// simplex refinement of the best few seeds. Ties break toward the
    /// lowest posterior mean.
    fn propose(&self, rng: &mut ChaCha8Rng) -> DspGains {
        let domain = &self.cfg.domain;
        let halton_start = rng.gen_range(0..1_000_000usize);
        let mut best: Option<(f64, f64, DspGains)> = None;
        let consider = |acq: f64, mu: f64, g: DspGains, best: &mut Option<(f64, f64, DspGains)>| {
            let better = match best {
                None => true,
                Some((ba, bm, _)) => acq > *ba || (acq == *ba && mu < *bm),
            };
            if better {
                *best = Some((acq, mu, g));
            }
        };
        for kappa2 in domain.kappa2_choices() {
            let onehot: Vec<f64> = (1..=4u8)
                .map(|k| if k == kappa2 { 1.0 } else { 0.0 })
                .collect();
            let encode_cont = |cont: &[f64]| -> Vec<f64> {
                let mut q = Vec::with_capacity(ENC_DIM);
                q.extend_from_slice(cont);
                q.extend_from_slice(&onehot);
                q
            };
            // Evaluate the acquisition on the decoded-then-reencoded point
            // so frozen dimensions and clamping are respected.
            let eval = |cont: &[f64]| -> (f64, f64, DspGains) {
                let (g, _) = domain.decode(&encode_cont(cont));
                let q = domain.encode(&g);
                let (a, mu) = self.acquisition(&q);
                (a, mu, g)
            };
            let mut seeds: Vec<(f64, f64, Vec<f64>)> = Vec::with_capacity(self.cfg.acq_seeds);
            for i in 0..self.cfg.acq_seeds {
                let cont = halton(halton_start + i, 4);
                let (a, mu, g) = eval(&cont);
                consider(a, mu, g, &mut best);
                seeds.push((a, mu, cont));
            }
            seeds.sort_by(|x, y| y.0.total_cmp(&x.0));
            for (_, _, cont) in seeds.into_iter().take(self.cfg.nm_refine) {
                let (refined, _) = neldermead::minimize(
                    |c| {
                        let (a, _, _) = eval(c);
                        -a
                    },
                    &cont,
                    0.05,
                    80,
                );
                let (a, mu, g) = eval(&refined);
                consider(a, mu, g, &mut best);
            }
        }
        best.expect("at least one category").2
    }
}

/// Minimize a deterministic objective over the controller-gain domain.
pub fn minimize_objective<F: FnMut(&DspGains) -> f64>(
    mut objective: F,
    cfg: &TuneConfig,
) -> TuneTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let domain = &cfg.domain;
    let kappas = domain.kappa2_choices();

    let mut cache: HashMap<[u64; 5], f64> = HashMap::new();
    let mut eval = move |g: &DspGains, objective: &mut F| -> f64 {
        let key = [
            g.beta1.to_bits(),
            g.beta2.to_bits(),
            g.beta3.to_bits(),
            g.alpha2.to_bits(),
            g.kappa2 as u64,
        ];
        if let Some(&c) = cache.get(&key) {
            return c;
        }
        let c = objective(g);
        cache.insert(key, c);
        c
    };

    let mut xs: Vec<Vec<f64>> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut entries: Vec<TraceEntry> = Vec::new();
    let mut best: Option<(DspGains, f64)> = None;

    let record = |g: DspGains,
                      c: f64,
                      phase: Phase,
                      entries: &mut Vec<TraceEntry>,
                      best: &mut Option<(DspGains, f64)>| {
        if best.as_ref().map_or(true, |(_, bc)| c < *bc) {
            *best = Some((g, c));
        }
        entries.push(TraceEntry {
            index: entries.len(),
            gains: g,
            cost: c,
            phase,
            incumbent_cost: best.as_ref().unwrap().1,
        });
    };

    // Initial design: Latin hypercube over the continuous block with the
    // limiter gain assigned round-robin.
    for (i, unit) in latin_hypercube(cfg.n_init, 4, &mut rng).into_iter().enumerate() {
        let kappa2 = kappas[i % kappas.len()];
        let mut q = unit;
        q.extend((1..=4u8).map(|k| if k == kappa2 { 1.0 } else { 0.0 }));
        let (g, _) = domain.decode(&q);
        let c = eval(&g, &mut objective);
        xs.push(domain.encode(&g));
        ys.push(c);
        record(g, c, Phase::Init, &mut entries, &mut best);
    }

    let mut model = GpModel::fit(xs.clone(), ys.clone(), cfg.seed, cfg.gp_restarts)
        .expect("initial design is separated");
    let mut since_refit = 0usize;

    for iter in 0..cfg.n_ei + cfg.n_pi {
        let phase = if iter < cfg.n_ei {
            Phase::ExpectedImprovement
        } else {
            Phase::ProbabilityOfImprovement
        };
        let explore = rng.gen::<f64>() < cfg.explore_prob;
        let mut candidate = if explore {
            domain.sample(&mut rng)
        } else {
            Proposer {
                cfg,
                model: &model,
                incumbent: best.as_ref().unwrap().1,
                phase,
            }
            .propose(&mut rng)
        };
        // Keep the training set separated; overly close proposals carry no
        // new information and degrade the covariance conditioning.
        let mut enc = domain.encode(&candidate);
        let mut tries = 0;
        while xs.iter().any(|x| linf(x, &enc) < cfg.min_separation) && tries < 32 {
            candidate = domain.sample(&mut rng);
            enc = domain.encode(&candidate);
            tries += 1;
        }
        if xs.iter().any(|x| linf(x, &enc) < 1e-12) {
            // Give up on this slot without corrupting the surrogate.
            let c = eval(&candidate, &mut objective);
            record(candidate, c, phase, &mut entries, &mut best);
            continue;
        }

        let c = eval(&candidate, &mut objective);
        record(candidate, c, phase, &mut entries, &mut best);
        xs.push(enc);
        ys.push(c);
        since_refit += 1;
        model = if since_refit >= cfg.refit_every || iter + 1 == cfg.n_ei {
            since_refit = 0;
            GpModel::fit(xs.clone(), ys.clone(), cfg.seed ^ (iter as u64 + 1), cfg.gp_restarts)
                .expect("separated training set")
        } else {
            model
                .refit_data(xs.clone(), ys.clone())
                .expect("separated training set")
        };
    }

    let (best_gains, best_cost) = best.expect("nonempty budget");
    TuneTrace {
        entries,
        best_gains,
        best_cost,
        last_gp_residual: model.interpolation_residual(),
    }
}

/// Tune a controller for `scheme` against a prepared benchmark suite.
pub fn tune_controller(
    scheme: &MprkScheme,
    suite: &[(Benchmark, ReferenceSolution)],
    cost_cfg: &CostConfig,
    opts: &AdaptiveOptions,
    cfg: &TuneConfig,
) -> TuneTrace {
    minimize_objective(
        |gains| cost_on_suite(scheme, gains, suite, cost_cfg, opts).total,
        cfg,
    )
}

/// Evaluate one parameter set under several schemes' cost functions.
pub fn cross_costs(
    gains: &DspGains,
    schemes: &[MprkScheme],
    suite: &[(Benchmark, ReferenceSolution)],
    cost_cfg: &CostConfig,
    opts: &AdaptiveOptions,
) -> Vec<(String, f64)> {
    schemes
        .iter()
        .map(|s| {
            (
                s.label(),
                cost_on_suite(s, gains, suite, cost_cfg, opts).total,
            )
        })
        .collect()
}
