//! Subcommand implementations.

pub mod compare;
pub mod cost;
pub mod reference;
pub mod solve;
pub mod tune;
pub mod wp;

use std::path::PathBuf;

use mprk_bench::reference::{ReferenceStore, DEFAULT_REF_TOL};
use mprk_bench::{training_suite, Benchmark, ReferenceSolution};

use crate::CliError;

/// Reference store from `--cache-dir`, `MPRK_CACHE_DIR`, or `./refcache`.
pub fn store_from(cache_dir: Option<PathBuf>) -> ReferenceStore {
    match cache_dir {
        Some(dir) => ReferenceStore::new(dir),
        None => ReferenceStore::from_env(),
    }
}

/// Training suite with references resolved (generating on demand).
pub fn prepared_training_suite(
    store: &ReferenceStore,
    ref_tol: Option<f64>,
) -> Result<Vec<(Benchmark, ReferenceSolution)>, CliError> {
    let tol = ref_tol.unwrap_or(DEFAULT_REF_TOL);
    training_suite()
        .into_iter()
        .map(|bench| {
            let (reference, _) = store.get_or_generate(&bench, tol)?;
            Ok((bench, reference))
        })
        .collect()
}
