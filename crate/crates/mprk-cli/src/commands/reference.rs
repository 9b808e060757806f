//! `mprk reference` — populate the reference cache.

use std::path::PathBuf;

use clap::Args;
use mprk_bench::problems::by_name;
use mprk_bench::reference::{CacheStatus, DEFAULT_REF_TOL};
use mprk_bench::{training_suite, validation_suite, Benchmark};
use rayon::prelude::*;

use crate::commands::store_from;
use crate::config::{pick, pick_opt, FileConfig};
use crate::{CliError};

#[derive(Args)]
pub struct ReferenceArgs {
    /// Problem selector; may repeat.
    #[arg(long = "problem")]
    problems: Vec<String>,
    /// Populate every training and validation problem.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    ref_tol: Option<f64>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: ReferenceArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let ref_tol = pick(args.ref_tol, file.ref_tol, DEFAULT_REF_TOL);
    let store = store_from(pick_opt(args.cache_dir, file.cache_dir.clone()));

    let mut benches: Vec<Benchmark> = Vec::new();
    if args.all {
        benches.extend(training_suite());
        // Deduplicate the shared PR4 family by name.
        for b in validation_suite() {
            if benches.iter().all(|x| x.name() != b.name()) {
                benches.push(b);
            }
        }
    } else if args.problems.is_empty() {
        return Err(CliError::Usage(
            "pass --problem <name> (repeatable) or --all".into(),
        ));
    }
    for spec in &args.problems {
        let b = by_name(spec)?;
        if benches.iter().all(|x| x.name() != b.name()) {
            benches.push(b);
        }
    }

    // Generation per problem is independent; cache writes are atomic.
    let results: Vec<Result<String, CliError>> = benches
        .par_iter()
        .map(|bench| {
            let (_, status) = store.get_or_generate(bench, ref_tol)?;
            Ok(match status {
                CacheStatus::Analytic => format!("{}: analytic", bench.name()),
                CacheStatus::Hit(p) => format!("{}: cache hit {}", bench.name(), p.display()),
                CacheStatus::Generated(p) => {
                    format!("{}: generated {}", bench.name(), p.display())
                }
            })
        })
        .collect();
    for r in results {
        println!("{}", r?);
    }
    Ok(())
}
