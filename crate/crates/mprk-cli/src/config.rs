//! Optional JSON config file; command-line flags take precedence over it,
//! and it over built-in defaults.

use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scheme: Option<String>,
    pub problem: Option<String>,
    pub controller: Option<String>,
    pub tol: Option<f64>,
    pub tols: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub ref_tol: Option<f64>,
    pub budget: Option<String>,
    pub svg: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// `flag.or(config).unwrap_or(default)`.
pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn pick_opt<T: Clone>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}
