//! Experiment harness for `mstlab-core`.
//!
//! [`run`] executes one catalogued experiment from an [`ExperimentSpec`] and
//! returns its [`RunManifest`] and long-format rows; [`write_outputs`] stores
//! them as `manifest.json` and `results.csv`. Parallelism is capped by the
//! `LAB_THREADS` environment variable and never changes the results.

pub mod config;
pub mod experiments;
pub mod stats;
pub mod ust;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{parse_config, ExperimentSpec, ParamSpec, Params};
pub use experiments::{catalogue, find, Check, Ctx, Experiment, Outcome, Row};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(String),
    #[error("unknown experiment {0:?} (try `lab list`)")]
    UnknownExperiment(String),
    #[error(transparent)]
    Core(#[from] mstlab_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

/// Everything needed to reproduce and judge a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub claim: String,
    pub seed: u64,
    pub replicas: usize,
    /// Every parameter after defaults, including the check bounds.
    pub params: BTreeMap<String, f64>,
    pub replica_seeds: Vec<u64>,
    pub started: String,
    pub finished: String,
    pub summary: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl RunManifest {
    /// The manifest without its timestamps, for reproducibility comparisons.
    pub fn untimed(&self) -> RunManifest {
        RunManifest { started: String::new(), finished: String::new(), ..self.clone() }
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Threads from `LAB_THREADS`, or rayon's default when unset or invalid.
pub fn lab_threads() -> Option<usize> {
    std::env::var("LAB_THREADS").ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// Runs the experiment named by `spec`.
pub fn run(spec: &ExperimentSpec) -> Result<(RunManifest, Vec<Row>)> {
    let exp = find(&spec.name)?;
    let params = Params::resolve(exp.params, &spec.params)?;
    let replicas = spec.replicas.unwrap_or(exp.default_replicas);
    if replicas == 0 {
        return Err(LabError::Config("replicas must be positive".into()));
    }
    let ctx = Ctx { params, seed: spec.seed, replicas };
    let started = now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = lab_threads() {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| exp.execute(&ctx))?;
    let manifest = RunManifest {
        experiment: exp.name.to_string(),
        claim: exp.claim.to_string(),
        seed: spec.seed,
        replicas,
        params: ctx.params.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        replica_seeds: (0..replicas).map(|r| ctx.replica_seed(r)).collect(),
        started,
        finished: now(),
        passed: outcome.passed(),
        summary: outcome.summary,
        checks: outcome.checks,
    };
    Ok((manifest, outcome.rows))
}

/// Writes `manifest.json` and `results.csv` into `dir`, creating it.
pub fn write_outputs(dir: &Path, manifest: &RunManifest, rows: &[Row]) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(manifest)? + "\n")?;
    let mut csv = std::io::BufWriter::new(fs::File::create(dir.join("results.csv"))?);
    writeln!(csv, "replica,statistic,value")?;
    for r in rows {
        writeln!(csv, "{},{},{}", r.replica, r.statistic, r.value)?;
    }
    csv.flush()?;
    Ok(())
}
