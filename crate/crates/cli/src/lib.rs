//! Driver behind the `fracfield` binary: declarative experiment configs in,
//! operator grids and verification, convergence, decay and timing tables out.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod fields;
pub mod output;

use std::path::{Path, PathBuf};

use fracfield::exec::{self, Execution};

pub use config::{Engine, ExperimentConfig, Kind};
pub use error::CliError;

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub engine: Option<Engine>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub filter: Vec<String>,
}

pub struct RunResult {
    pub written: Vec<PathBuf>,
    pub summary: Vec<String>,
    pub failed: bool,
}

/// Merge overrides into a parsed config and normalise it.
pub fn prepare(cfg: ExperimentConfig, kind: Kind, ov: &Overrides) -> Result<ExperimentConfig, CliError> {
    let mut cfg = cfg.normalize(kind)?;
    if let Some(s) = ov.seed {
        cfg.seed = s;
    }
    if let Some(e) = ov.engine {
        if let Some(op) = cfg.op.as_mut() {
            op.engine = e;
        }
        if let Some(c) = cfg.convergence.as_mut() {
            c.engine = e;
        }
    }
    if !ov.filter.is_empty() {
        if let Some(v) = cfg.verify.as_mut() {
            v.filter = ov.filter.clone();
        }
        cfg = cfg.normalize(kind)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Load, validate, run and write.
pub fn run(kind: Kind, config: &Path, ov: &Overrides) -> Result<RunResult, CliError> {
    let cfg = prepare(ExperimentConfig::load(config)?, kind, ov)?;
    let out = ov.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    let jobs = ov.jobs.unwrap_or(0);
    let execution = if jobs == 1 { Execution::Sequential } else { Execution::Parallel };
    let ctx = commands::Context { cfg, exec: execution };
    let outcome = exec::with_threads(jobs, || commands::run(&ctx))?;
    let written = output::write_all(&out, &outcome.files)?;
    Ok(RunResult { written, summary: outcome.summary, failed: outcome.failed })
}
