//! `mprk compare-standard` — rate the nine standard controllers.

use std::path::PathBuf;

use clap::Args;
use mprk_bench::{cost_on_suite, standard_controllers, CostConfig};
use mprk_core::{AdaptiveOptions, DspGains};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::{prepared_training_suite, store_from};
use crate::config::{pick, pick_opt, FileConfig};
use crate::output::{write_json, BreakdownJson, GainsJson};
use crate::{parse, CliError};

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long)]
    scheme: Option<String>,
    /// Additional controllers to rate alongside the standard nine.
    #[arg(long = "controller", allow_hyphen_values = true)]
    extra: Vec<String>,
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
struct CompareRow {
    controller: GainsJson,
    label: String,
    total: f64,
    below_penalty: bool,
    disqualified: bool,
    breakdown: BreakdownJson,
}

#[derive(Serialize)]
struct CompareDoc {
    scheme: String,
    penalty: f64,
    rows: Vec<CompareRow>,
    cheapest: String,
}

pub fn run(args: CompareArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let scheme = parse::scheme(&pick(args.scheme, file.scheme.clone(), "mprk22:1".into()))?;
    let out = pick(args.out, file.out.clone(), "compare_out".into());
    let store = store_from(pick_opt(args.cache_dir, file.cache_dir.clone()));
    let suite = prepared_training_suite(&store, pick_opt(args.ref_tol, file.ref_tol))?;

    let mut list: Vec<(String, DspGains)> = standard_controllers();
    for spec in &args.extra {
        let g = parse::controller(spec)?;
        list.push((g.to_string(), g));
    }

    let cfg = CostConfig::default();
    let opts = AdaptiveOptions::default();
    // Controllers are independent; the per-candidate cancel-early order is
    // preserved inside each evaluation. Output keeps the input order.
    let rows: Vec<CompareRow> = list
        .par_iter()
        .map(|(label, gains)| {
            let bd = cost_on_suite(&scheme, gains, &suite, &cfg, &opts);
            CompareRow {
                controller: GainsJson::from(gains),
                label: label.clone(),
                total: bd.total,
                below_penalty: bd.total < cfg.disqualify_penalty,
                disqualified: bd.disqualified.is_some(),
                breakdown: BreakdownJson::from(&bd),
            }
        })
        .collect();

    println!("scheme {}", scheme.label());
    for row in &rows {
        println!(
            "  {:>34}  total {:8.4}{}{}",
            row.label,
            row.total,
            if row.below_penalty { "  below-M" } else { "" },
            if row.disqualified { "  DISQUALIFIED" } else { "" }
        );
    }
    let cheapest = rows
        .iter()
        .min_by(|a, b| a.total.total_cmp(&b.total))
        .map(|r| r.label.clone())
        .unwrap_or_default();
    println!("  cheapest: {cheapest}");

    let doc = CompareDoc {
        scheme: scheme.label(),
        penalty: cfg.disqualify_penalty,
        rows,
        cheapest,
    };
    write_json(std::path::Path::new(&format!("{out}.json")), &doc)?;
    Ok(())
}
