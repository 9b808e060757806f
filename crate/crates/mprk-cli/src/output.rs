//! Machine-readable output helpers: CSV rows, JSON documents, shared
//! serializable shapes.

use std::fs;
use std::io::Write;
use std::path::Path;

use mprk_bench::cost::CostBreakdown;
use mprk_bench::WpPoint;
use mprk_core::DspGains;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct GainsJson {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub alpha2: f64,
    pub kappa2: u8,
}

impl From<&DspGains> for GainsJson {
    fn from(g: &DspGains) -> Self {
        Self {
            beta1: g.beta1,
            beta2: g.beta2,
            beta3: g.beta3,
            alpha2: g.alpha2,
            kappa2: g.kappa2,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CellJson {
    pub tol: f64,
    /// `None` encodes the NaN sentinel of runs without accepted steps.
    pub err: Option<f64>,
    pub s: u64,
    pub r: u64,
    pub aborted: Option<String>,
    pub c_step: Option<f64>,
    pub c_tol: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct TestJson {
    pub test: String,
    pub inner_sum: f64,
    pub psi: f64,
    pub completed: bool,
    pub cells: Vec<CellJson>,
}

#[derive(Debug, Serialize)]
pub struct BreakdownJson {
    pub total: f64,
    pub disqualified: Option<DisqualifiedJson>,
    pub tests: Vec<TestJson>,
}

#[derive(Debug, Serialize)]
pub struct DisqualifiedJson {
    pub test: String,
    pub tol: f64,
    pub slope: f64,
}

fn opt(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&CostBreakdown> for BreakdownJson {
    fn from(bd: &CostBreakdown) -> Self {
        Self {
            total: bd.total,
            disqualified: bd.disqualified.as_ref().map(|d| DisqualifiedJson {
                test: d.test.clone(),
                tol: d.tol,
                slope: d.slope,
            }),
            tests: bd
                .tests
                .iter()
                .map(|t| TestJson {
                    test: t.test.clone(),
                    inner_sum: t.inner_sum,
                    psi: t.psi,
                    completed: t.completed,
                    cells: t
                        .cells
                        .iter()
                        .map(|c| CellJson {
                            tol: c.tol,
                            err: opt(c.err),
                            s: c.s,
                            r: c.r,
                            aborted: c.aborted.map(|a| a.as_str().to_string()),
                            c_step: opt(c.c_step),
                            c_tol: opt(c.c_tol),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Runtime(format!("json: {e}")))?;
    f.write_all(text.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn wp_csv(points: &[WpPoint]) -> String {
    let mut out = String::from("tol,err,s,r,total,aborted\n");
    for p in points {
        out.push_str(&format!(
            "{:e},{},{},{},{},{}\n",
            p.tol,
            if p.err.is_nan() {
                "nan".to_string()
            } else {
                format!("{:e}", p.err)
            },
            p.s,
            p.r,
            p.total_steps(),
            p.aborted as u8
        ));
    }
    out
}
