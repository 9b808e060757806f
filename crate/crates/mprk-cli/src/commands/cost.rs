//! `mprk cost` — tuning cost of one controller on the training suite.

use std::path::PathBuf;

use clap::Args;
use mprk_bench::{cost_on_suite, CostConfig};
use mprk_core::AdaptiveOptions;
use serde::Serialize;

use crate::commands::{prepared_training_suite, store_from};
use crate::config::{pick, pick_opt, FileConfig};
use crate::output::{write_json, BreakdownJson, GainsJson};
use crate::{parse, CliError};

#[derive(Args)]
pub struct CostArgs {
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    controller: Option<String>,
    /// Tolerance slack s of the cost function.
    #[arg(long)]
    slack: Option<f64>,
    /// Output prefix; writes <out>.json with the full breakdown.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    ref_tol: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct CostDoc {
    scheme: String,
    controller: GainsJson,
    slack: f64,
    breakdown: BreakdownJson,
}

pub fn run(args: CostArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let scheme = parse::scheme(&pick(args.scheme, file.scheme.clone(), "mprk22:1".into()))?;
    let gains = parse::controller(&pick(
        args.controller,
        file.controller.clone(),
        "2,-1,0,-1,1".into(),
    ))?;
    let slack = args.slack.unwrap_or(1.0);
    if !(slack > 0.0) {
        return Err(CliError::Usage(format!("slack must be positive, got {slack}")));
    }
    let out = pick(args.out, file.out.clone(), "cost_out".into());
    let store = store_from(pick_opt(args.cache_dir, file.cache_dir.clone()));
    let suite = prepared_training_suite(&store, pick_opt(args.ref_tol, file.ref_tol))?;

    let cfg = CostConfig {
        s: slack,
        ..CostConfig::default()
    };
    let bd = cost_on_suite(&scheme, &gains, &suite, &cfg, &AdaptiveOptions::default());

    println!("scheme {}  controller {}", scheme.label(), gains);
    for t in &bd.tests {
        println!(
            "  {:>10}: inner {:10.4}  psi {:7.4}{}",
            t.test,
            t.inner_sum,
            t.psi,
            if t.completed { "" } else { "  (canceled)" }
        );
    }
    if let Some(d) = &bd.disqualified {
        println!(
            "  disqualified at {} tol {:.1e} (slope {:.3})",
            d.test, d.tol, d.slope
        );
    }
    println!("  total {:.4}", bd.total);

    let doc = CostDoc {
        scheme: scheme.label(),
        controller: GainsJson::from(&gains),
        slack,
        breakdown: BreakdownJson::from(&bd),
    };
    write_json(std::path::Path::new(&format!("{out}.json")), &doc)?;
    Ok(())
}
