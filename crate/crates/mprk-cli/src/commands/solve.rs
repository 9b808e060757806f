//! `mprk solve` — one adaptive run with trajectory dump.

use std::path::PathBuf;

use clap::Args;
use mprk_bench::problems::by_name;
use mprk_bench::reference::DEFAULT_REF_TOL;
use mprk_bench::{err as wp_err};
use mprk_core::{integrate_adaptive, AdaptiveOptions};
use serde::Serialize;

use crate::commands::store_from;
use crate::config::{pick, pick_opt, FileConfig};
use crate::output::{write_json, write_text, GainsJson};
use crate::{parse, CliError};

#[derive(Args)]
pub struct SolveArgs {
    /// Problem selector (pr4[:xi], robertson, hires, npzd, brusselator).
    #[arg(long)]
    problem: Option<String>,
    /// Scheme selector (mprk22[:alpha], mprk43ab[:a,b], mprk43g[:g]).
    #[arg(long)]
    scheme: Option<String>,
    /// Controller gains beta1,beta2,beta3,alpha2,kappa2.
    #[arg(long, allow_hyphen_values = true)]
    controller: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Output prefix; writes <out>.csv and <out>.json.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Reference tolerance used for the error report.
    #[arg(long)]
    ref_tol: Option<f64>,
    /// JSON config file supplying defaults for the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct SolveSummary {
    problem: String,
    scheme: String,
    controller: GainsJson,
    tol: f64,
    s: u64,
    r: u64,
    k: usize,
    t_final: f64,
    aborted: Option<String>,
    err: Option<f64>,
    all_positive: bool,
    sum_initial: f64,
    sum_final: f64,
}

pub fn run(args: SolveArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let problem_spec = pick(args.problem, file.problem.clone(), "robertson".into());
    let scheme = parse::scheme(&pick(args.scheme, file.scheme.clone(), "mprk22:1".into()))?;
    let gains = parse::controller(&pick(
        args.controller,
        file.controller.clone(),
        "2,-1,0,-1,1".into(),
    ))?;
    let tol = parse::tolerance(pick(args.tol, file.tol, 1e-4))?;
    let out = pick(args.out, file.out.clone(), "solve_out".into());
    let store = store_from(pick_opt(args.cache_dir, file.cache_dir.clone()));
    let ref_tol = pick(args.ref_tol, file.ref_tol, DEFAULT_REF_TOL);

    let bench = by_name(&problem_spec)?;
    let opts = AdaptiveOptions {
        record_attempts: true,
        ..AdaptiveOptions::default()
    };
    let report = integrate_adaptive(&bench.problem, &scheme, &gains, tol, &opts);
    let (reference, _) = store.get_or_generate(&bench, ref_tol)?;
    let e = wp_err(&report, &reference);

    // Trajectory CSV: the initial node plus one row per attempt.
    let n = bench.problem.dim;
    let mut csv = String::from("t,");
    for i in 1..=n {
        csv.push_str(&format!("y{i},"));
    }
    csv.push_str("dt,accepted\n");
    let row = |t: f64, y: Option<&[f64]>, dt: f64, accepted: u8| -> String {
        let mut s = format!("{t:e},");
        match y {
            Some(y) => {
                for v in y {
                    s.push_str(&format!("{v:e},"));
                }
            }
            None => {
                for _ in 0..n {
                    s.push_str("nan,");
                }
            }
        }
        s.push_str(&format!("{dt:e},{accepted}\n"));
        s
    };
    csv.push_str(&row(report.times[0], Some(&report.states[0]), 0.0, 1));
    for a in report.attempts.as_deref().unwrap_or(&[]) {
        csv.push_str(&row(a.t, a.y.as_deref(), a.dt, a.accepted as u8));
    }
    write_text(std::path::Path::new(&format!("{out}.csv")), &csv)?;

    let summary = SolveSummary {
        problem: bench.problem.name.clone(),
        scheme: scheme.label(),
        controller: GainsJson::from(&gains),
        tol,
        s: report.s,
        r: report.r,
        k: report.k(),
        t_final: report.final_time(),
        aborted: report.aborted.map(|a| a.as_str().to_string()),
        err: e.is_finite().then_some(e),
        all_positive: report
            .states
            .iter()
            .all(|y| y.iter().all(|v| *v > 0.0)),
        sum_initial: report.states[0].iter().sum(),
        sum_final: report.final_state().iter().sum(),
    };
    write_json(std::path::Path::new(&format!("{out}.json")), &summary)?;
    println!(
        "{}: S={} R={} err={} -> {out}.csv {out}.json",
        bench.problem.name,
        report.s,
        report.r,
        if e.is_finite() {
            format!("{e:.3e}")
        } else {
            "nan".into()
        }
    );
    Ok(())
}
