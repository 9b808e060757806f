//! `mprk wp` — work-precision sweep for one problem/scheme/controller.

use std::path::PathBuf;

use clap::Args;
use mprk_bench::problems::by_name;
use mprk_bench::reference::DEFAULT_REF_TOL;
use mprk_bench::{wp_point, TOL_SET};
use mprk_core::AdaptiveOptions;

use crate::commands::store_from;
use crate::config::{pick, pick_opt, FileConfig};
use crate::output::{wp_csv, write_text};
use crate::svg::wp_svg;
use crate::{parse, CliError};

#[derive(Args)]
pub struct WpArgs {
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    controller: Option<String>,
    /// Comma-separated tolerance list (default 1e-1..1e-8).
    #[arg(long)]
    tols: Option<String>,
    /// Output prefix; writes <out>.csv (and <out>.svg with --svg).
    #[arg(long)]
    out: Option<String>,
    /// Also emit a log-log SVG plot with slope annotations.
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    ref_tol: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: WpArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let problem_spec = pick(args.problem, file.problem.clone(), "npzd".into());
    let scheme = parse::scheme(&pick(args.scheme, file.scheme.clone(), "mprk22:1".into()))?;
    let gains = parse::controller(&pick(
        args.controller,
        file.controller.clone(),
        "2,-1,0,-1,1".into(),
    ))?;
    let tols: Vec<f64> = match pick_opt(args.tols, None) {
        Some(spec) => {
            let parsed: Result<Vec<f64>, _> = spec.split(',').map(str::parse).collect();
            parsed.map_err(|_| CliError::Usage(format!("bad tolerance list '{spec}'")))?
        }
        None => file.tols.clone().unwrap_or_else(|| TOL_SET.to_vec()),
    };
    if tols.is_empty() {
        return Err(CliError::Usage("tolerance list is empty".into()));
    }
    for &t in &tols {
        parse::tolerance(t)?;
    }
    let out = pick(args.out, file.out.clone(), "wp_out".into());
    let svg = args.svg || file.svg.unwrap_or(false);
    let store = store_from(pick_opt(args.cache_dir, file.cache_dir.clone()));
    let ref_tol = pick(args.ref_tol, file.ref_tol, DEFAULT_REF_TOL);

    let bench = by_name(&problem_spec)?;
    let (reference, _) = store.get_or_generate(&bench, ref_tol)?;
    let opts = AdaptiveOptions::default();
    let points: Vec<_> = tols
        .iter()
        .map(|&tol| wp_point(&bench, &scheme, &gains, tol, &reference, &opts))
        .collect();

    write_text(std::path::Path::new(&format!("{out}.csv")), &wp_csv(&points))?;
    if svg {
        let title = format!("{} {} {}", bench.problem.name, scheme.label(), gains);
        write_text(
            std::path::Path::new(&format!("{out}.svg")),
            &wp_svg(&title, &points),
        )?;
    }
    for p in &points {
        println!(
            "tol {:8.1e}  err {:12}  S {:8}  R {:6}{}",
            p.tol,
            if p.err.is_nan() {
                "nan".to_string()
            } else {
                format!("{:.5e}", p.err)
            },
            p.s,
            p.r,
            if p.aborted { "  ABORT" } else { "" }
        );
    }
    Ok(())
}
