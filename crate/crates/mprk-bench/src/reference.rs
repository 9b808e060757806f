//! Reference solutions: generation, on-disk caching, dense evaluation.
//!
//! Problems without an analytic solution get a numerical reference computed
//! by MPRK43(0.5, 0.75) under the standard controller (2,-1,0,-1,1) at
//! `atol = rtol = ref_tol` (default 1e-12). Every accepted node stores
//! `(t, y, f(y, t))`, which makes dense cubic Hermite evaluation exact at
//! the nodes and third-order accurate in between — well below the error
//! floor the work-precision experiments probe.
//!
//! Cache files are little-endian binary with a textual sidecar; the exact
//! f64 bit patterns round-trip, so regeneration and reuse are
//! indistinguishable.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use mprk_core::{integrate_adaptive, AdaptiveOptions, DspGains, MprkScheme};

use crate::error::BenchError;
use crate::problems::{AnalyticFn, Benchmark};

/// Default tolerance for numerical references.
pub const DEFAULT_REF_TOL: f64 = 1e-12;

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "MPRK_CACHE_DIR";

const MAGIC: &[u8; 8] = b"MPRKREF1";

/// A stored numerical reference trajectory with derivatives at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RefTrajectory {
    pub problem: String,
    pub ref_tol: f64,
    pub dim: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub derivs: Vec<Vec<f64>>,
}

impl RefTrajectory {
    pub fn t0(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }
}

/// Dense-evaluable reference solution.
#[derive(Clone)]
pub enum ReferenceSolution {
    Analytic {
        eval: Arc<AnalyticFn>,
        t0: f64,
        t_end: f64,
        dim: usize,
    },
    Trajectory(Arc<RefTrajectory>),
}

impl std::fmt::Debug for ReferenceSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReferenceSolution::Analytic { t0, t_end, dim, .. } => f
                .debug_struct("Analytic")
                .field("t0", t0)
                .field("t_end", t_end)
                .field("dim", dim)
                .finish(),
            ReferenceSolution::Trajectory(t) => f
                .debug_struct("Trajectory")
                .field("problem", &t.problem)
                .field("nodes", &t.times.len())
                .finish(),
        }
    }
}

/// Where a reference came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Analytic,
    Hit(PathBuf),
    Generated(PathBuf),
}

/// Evaluate a reference at time `t` inside its span.
pub fn eval_reference(reference: &ReferenceSolution, t: f64) -> Result<Vec<f64>, BenchError> {
    match reference {
        ReferenceSolution::Analytic { eval, t0, t_end, .. } => {
            if t < *t0 || t > *t_end {
                return Err(BenchError::OutOfDomain {
                    t,
                    t0: *t0,
                    t_end: *t_end,
                });
            }
            Ok(eval(t))
        }
        ReferenceSolution::Trajectory(traj) => hermite_eval(traj, t),
    }
}

/// Cubic Hermite interpolation on the bracketing interval; exact at nodes.
fn hermite_eval(traj: &RefTrajectory, t: f64) -> Result<Vec<f64>, BenchError> {
    let times = &traj.times;
    let (t0, t_end) = (traj.t0(), traj.t_end());
    if t < t0 || t > t_end {
        return Err(BenchError::OutOfDomain { t, t0, t_end });
    }
    let hi = times.partition_point(|&x| x <= t).min(times.len() - 1);
    let lo = hi - 1;
    if t == times[lo] {
        return Ok(traj.states[lo].clone());
    }
    if t == times[hi] {
        return Ok(traj.states[hi].clone());
    }
    let h = times[hi] - times[lo];
    let s = (t - times[lo]) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let (ylo, yhi) = (&traj.states[lo], &traj.states[hi]);
    let (flo, fhi) = (&traj.derivs[lo], &traj.derivs[hi]);
    Ok((0..traj.dim)
        .map(|i| h00 * ylo[i] + h10 * h * flo[i] + h01 * yhi[i] + h11 * h * fhi[i])
        .collect())
}

/// Compute a numerical reference without touching the cache.
///
/// The abort limits are relaxed (`S_max = 1e7`) relative to experiment
/// runs; at `ref_tol = 1e-12` the trajectories stay far below that.
pub fn generate_reference(bench: &Benchmark, ref_tol: f64) -> Result<RefTrajectory, BenchError> {
    let scheme = MprkScheme::mprk43_alpha_beta(0.5, 0.75).expect("reference scheme");
    let gains = DspGains::new(2.0, -1.0, 0.0, -1.0, 1);
    let opts = AdaptiveOptions {
        s_max: 10_000_000,
        ..AdaptiveOptions::default()
    };
    let report = integrate_adaptive(&bench.problem, &scheme, &gains, ref_tol, &opts);
    if let Some(reason) = report.aborted {
        return Err(BenchError::generation(&bench.problem.name, reason));
    }
    let derivs = report
        .times
        .iter()
        .zip(&report.states)
        .map(|(&t, y)| {
            bench.problem.rhs(y, t).map_err(|_| BenchError::Generation {
                problem: bench.problem.name.clone(),
                reason: "non-finite derivative at accepted node",
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RefTrajectory {
        problem: bench.problem.name.clone(),
        ref_tol,
        dim: bench.problem.dim,
        times: report.times,
        states: report.states,
        derivs,
    })
}

/// File-backed reference cache keyed by `(problem name, ref_tol)`.
#[derive(Debug, Clone)]
pub struct ReferenceStore {
    dir: PathBuf,
}

impl ReferenceStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Directory from `MPRK_CACHE_DIR`, falling back to `./refcache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("refcache"));
        Self::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, problem: &str, ref_tol: f64) -> PathBuf {
        self.dir.join(format!("{problem}_tol{ref_tol:e}.ref"))
    }

    /// Obtain a dense reference, preferring (in order): analytic solution,
    /// cache file, fresh generation with cache write.
    pub fn get_or_generate(
        &self,
        bench: &Benchmark,
        ref_tol: f64,
    ) -> Result<(ReferenceSolution, CacheStatus), BenchError> {
        if let Some(analytic) = &bench.analytic {
            return Ok((
                ReferenceSolution::Analytic {
                    eval: analytic.clone(),
                    t0: bench.problem.t0,
                    t_end: bench.problem.t_end,
                    dim: bench.problem.dim,
                },
                CacheStatus::Analytic,
            ));
        }
        let path = self.path_for(&bench.problem.name, ref_tol);
        if path.is_file() {
            let traj = read_trajectory(&path)?;
            return Ok((
                ReferenceSolution::Trajectory(Arc::new(traj)),
                CacheStatus::Hit(path),
            ));
        }
        let traj = generate_reference(bench, ref_tol)?;
        fs::create_dir_all(&self.dir)?;
        write_trajectory(&path, &traj)?;
        Ok((
            ReferenceSolution::Trajectory(Arc::new(traj)),
            CacheStatus::Generated(path),
        ))
    }
}

fn write_trajectory(path: &Path, traj: &RefTrajectory) -> Result<(), BenchError> {
    let mut buf: Vec<u8> = Vec::with_capacity(64 + traj.times.len() * (1 + 2 * traj.dim) * 8);
    buf.extend_from_slice(MAGIC);
    let name = traj.problem.as_bytes();
    buf.extend_from_slice(&(name.len() as u32).to_le_bytes());
    buf.extend_from_slice(name);
    buf.extend_from_slice(&traj.ref_tol.to_le_bytes());
    buf.extend_from_slice(&(traj.dim as u32).to_le_bytes());
    buf.extend_from_slice(&(traj.times.len() as u64).to_le_bytes());
    for k in 0..traj.times.len() {
        buf.extend_from_slice(&traj.times[k].to_le_bytes());
        for v in &traj.states[k] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        for v in &traj.derivs[k] {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    // Write to a temp file in the same directory and persist atomically, so
    // concurrent generators of the same key cannot observe torn files.
    static TMP_SEQ: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
    let seq = TMP_SEQ.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let tmp = path.with_extension(format!("tmp{}-{seq}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    write_sidecar(path, traj)?;
    Ok(())
}

fn write_sidecar(path: &Path, traj: &RefTrajectory) -> Result<(), BenchError> {
    let mut text = String::new();
    text.push_str("mprk reference trajectory\n");
    text.push_str(&format!("problem: {}\n", traj.problem));
    text.push_str(&format!("ref_tol: {:e}\n", traj.ref_tol));
    text.push_str(&format!("dim: {}\n", traj.dim));
    text.push_str(&format!("nodes: {}\n", traj.times.len()));
    text.push_str(&format!("span: [{}, {}]\n", traj.t0(), traj.t_end()));
    text.push_str("generator: MPRK43(0.5,0.75) + DSP(2,-1,0,-1,1)\n");
    text.push_str("columns: t y_1..y_N f_1..f_N (binary little-endian f64)\n");
    for (label, k) in [("first", 0), ("last", traj.times.len() - 1)] {
        text.push_str(&format!(
            "{label} node: t = {:e}, y = {:?}\n",
            traj.times[k], traj.states[k]
        ));
    }
    let mut f = fs::File::create(path.with_extension("ref.txt"))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.bytes.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(s)
    }

    fn f64(&mut self) -> Option<f64> {
        Some(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn read_trajectory(path: &Path) -> Result<RefTrajectory, BenchError> {
    let corrupt = |detail: &str| BenchError::Corrupt {
        path: path.display().to_string(),
        detail: detail.to_string(),
    };
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    let mut cur = Cursor {
        bytes: &bytes,
        pos: 0,
    };
    (|| -> Option<RefTrajectory> {
        if cur.take(8)? != MAGIC {
            return None;
        }
        let name_len = cur.u32()? as usize;
        let problem = String::from_utf8(cur.take(name_len)?.to_vec()).ok()?;
        let ref_tol = cur.f64()?;
        let dim = cur.u32()? as usize;
        let nodes = cur.u64()? as usize;
        if dim == 0 || nodes < 2 {
            return None;
        }
        let mut times = Vec::with_capacity(nodes);
        let mut states = Vec::with_capacity(nodes);
        let mut derivs = Vec::with_capacity(nodes);
        for _ in 0..nodes {
            times.push(cur.f64()?);
            states.push((0..dim).map(|_| cur.f64()).collect::<Option<Vec<_>>>()?);
            derivs.push((0..dim).map(|_| cur.f64()).collect::<Option<Vec<_>>>()?);
        }
        if cur.pos != bytes.len() {
            return None;
        }
        Some(RefTrajectory {
            problem,
            ref_tol,
            dim,
            times,
            states,
            derivs,
        })
    })()
    .ok_or_else(|| corrupt("truncated or malformed"))
}
