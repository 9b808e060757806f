//! `mprk` — solve production-destruction systems with MPRK schemes, build
//! work-precision tables, rate step size controllers, and tune them.

mod commands;
mod config;
mod output;
mod parse;
mod svg;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

/// Positivity-preserving MPRK solvers with adaptive DSP step size control.
#[derive(Parser)]
#[command(name = "mprk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one problem at one tolerance; write trajectory CSV + JSON summary.
    Solve(commands::solve::SolveArgs),
    /// Work-precision sweep over a tolerance list; write CSV (and SVG).
    Wp(commands::wp::WpArgs),
    /// Evaluate the tuning cost of one controller on the training suite.
    Cost(commands::cost::CostArgs),
    /// Evaluate the nine standard controllers (plus extras) on one scheme.
    CompareStandard(commands::compare::CompareArgs),
    /// Bayesian-optimize controller gains for one scheme.
    Tune(commands::tune::TuneArgs),
    /// Generate and cache reference solutions.
    Reference(commands::reference::ReferenceArgs),
}

/// Failures carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid usage or configuration: exit code 2.
    Usage(String),
    /// Runtime failure: exit code 1.
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o error: {e}"))
    }
}

impl From<mprk_bench::BenchError> for CliError {
    fn from(e: mprk_bench::BenchError) -> Self {
        match e {
            mprk_bench::BenchError::UnknownProblem(_) => CliError::Usage(format!(
                "{e}; valid problems: pr4[:xi], robertson, hires, npzd, brusselator"
            )),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => commands::solve::run(args),
        Command::Wp(args) => commands::wp::run(args),
        Command::Cost(args) => commands::cost::run(args),
        Command::CompareStandard(args) => commands::compare::run(args),
        Command::Tune(args) => commands::tune::run(args),
        Command::Reference(args) => commands::reference::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
