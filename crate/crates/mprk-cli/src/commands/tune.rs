//! `mprk tune` — Bayesian optimization of controller gains.

use std::path::PathBuf;

use clap::Args;
use mprk_bench::reference::DEFAULT_REF_TOL;
use mprk_bench::{validation_suite, wp_point, CostConfig, TOL_SET};
use mprk_core::{AdaptiveOptions, MprkScheme};
use mprk_tune::{tune_controller, TuneConfig};
use serde::Serialize;

use crate::commands::{prepared_training_suite, store_from};
use crate::config::{pick, pick_opt, FileConfig};
use crate::output::{wp_csv, write_json, write_text, GainsJson};
use crate::{parse, CliError};

#[derive(Args)]
pub struct TuneArgs {
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration budget 'n1,n2' for the two acquisition phases.
    #[arg(long)]
    budget: Option<String>,
    /// Use the full 500,500 budget.
    #[arg(long)]
    paper_scale: bool,
    /// Output prefix; writes <out>.best.json and <out>.trace.jsonl.
    #[arg(long)]
    out: Option<String>,
    /// Re-run the incumbent on the validation problems and write WP files.
    #[arg(long)]
    validate: bool,
    /// Also evaluate the incumbent under the other two preferred schemes.
    #[arg(long)]
    cross: bool,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    ref_tol: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct TraceLine {
    index: usize,
    phase: &'static str,
    gains: GainsJson,
    cost: f64,
    incumbent: f64,
}

#[derive(Serialize)]
struct BestDoc {
    scheme: String,
    seed: u64,
    budget: (usize, usize),
    gains: GainsJson,
    cost: f64,
    evaluations: usize,
    gp_interpolation_residual: f64,
    cross: Vec<CrossEntry>,
}

#[derive(Serialize)]
struct CrossEntry {
    scheme: String,
    cost: f64,
}

pub fn run(args: TuneArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let scheme = parse::scheme(&pick(args.scheme, file.scheme.clone(), "mprk22:1".into()))?;
    let seed = pick(args.seed, file.seed, 0);
    let (n_ei, n_pi) = if args.paper_scale {
        (500, 500)
    } else {
        parse::budget(&pick(args.budget, file.budget.clone(), "100,100".into()))?
    };
    let out = pick(args.out, file.out.clone(), "tune_out".into());
    let store = store_from(pick_opt(args.cache_dir, file.cache_dir.clone()));
    let ref_tol = pick(args.ref_tol, file.ref_tol, DEFAULT_REF_TOL);
    let suite = prepared_training_suite(&store, Some(ref_tol))?;

    let cost_cfg = CostConfig::default();
    let opts = AdaptiveOptions::default();
    let tune_cfg = TuneConfig {
        n_ei,
        n_pi,
        seed,
        ..TuneConfig::default()
    };
    let trace = tune_controller(&scheme, &suite, &cost_cfg, &opts, &tune_cfg);

    let mut jsonl = String::new();
    for e in &trace.entries {
        let line = TraceLine {
            index: e.index,
            phase: match e.phase {
                mprk_tune::Phase::Init => "init",
                mprk_tune::Phase::ExpectedImprovement => "ei",
                mprk_tune::Phase::ProbabilityOfImprovement => "pi",
            },
            gains: GainsJson::from(&e.gains),
            cost: e.cost,
            incumbent: e.incumbent_cost,
        };
        jsonl.push_str(
            &serde_json::to_string(&line).map_err(|e| CliError::Runtime(e.to_string()))?,
        );
        jsonl.push('\n');
    }
    write_text(std::path::Path::new(&format!("{out}.trace.jsonl")), &jsonl)?;

    let mut cross = Vec::new();
    if args.cross {
        let others: Vec<MprkScheme> = [
            MprkScheme::mprk22(1.0),
            MprkScheme::mprk43_alpha_beta(0.5, 0.75),
            MprkScheme::mprk43_gamma(0.563),
        ]
        .into_iter()
        .map(|s| s.expect("preferred members are feasible"))
        .filter(|s| s.label() != scheme.label())
        .collect();
        for (label, cost) in
            mprk_tune::tune::cross_costs(&trace.best_gains, &others, &suite, &cost_cfg, &opts)
        {
            cross.push(CrossEntry { scheme: label, cost });
        }
    }

    let doc = BestDoc {
        scheme: scheme.label(),
        seed,
        budget: (n_ei, n_pi),
        gains: GainsJson::from(&trace.best_gains),
        cost: trace.best_cost,
        evaluations: trace.entries.len(),
        gp_interpolation_residual: trace.last_gp_residual,
        cross,
    };
    write_json(std::path::Path::new(&format!("{out}.best.json")), &doc)?;
    println!(
        "best {} cost {:.4} -> {out}.best.json ({} evaluations)",
        trace.best_gains,
        trace.best_cost,
        trace.entries.len()
    );

    if args.validate {
        for bench in validation_suite() {
            let (reference, _) = store.get_or_generate(&bench, ref_tol)?;
            let points: Vec<_> = TOL_SET
                .iter()
                .map(|&tol| wp_point(&bench, &scheme, &trace.best_gains, tol, &reference, &opts))
                .collect();
            let path = format!("{out}.validate.{}.csv", bench.problem.name);
            write_text(std::path::Path::new(&path), &wp_csv(&points))?;
            println!("validation WP -> {path}");
        }
    }
    Ok(())
}
