pub mod flow;
pub mod generator;
pub mod leakage;
pub mod symcheck;
pub mod yngvason;

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use serde::Serialize;

use crate::config::ConfigFile;
use crate::output::{Outputs, Report};

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct Context {
    pub file: ConfigFile,
    pub out_dir: PathBuf,
    pub seed: u64,
    /// Adds wall-clock runtime to the JSON report, which makes it
    /// non-reproducible; off by default.
    pub timing: bool,
}

impl Context {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            file: ConfigFile::default(),
            out_dir: out_dir.into(),
            seed: 0,
            timing: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// No sign or prefactor convention met the tolerance.
    ConventionFailure,
    /// A symbol failed its claimed estimate.
    SymbolFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::ConventionFailure => 3,
            Status::SymbolFailure => 4,
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

/// 2 when the failure is a flow evaluated outside its domain, 1 otherwise.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    let domain = err
        .chain()
        .filter_map(|e| e.downcast_ref::<modflow_core::Error>())
        .any(modflow_core::Error::is_domain);
    if domain {
        EXIT_DOMAIN
    } else {
        EXIT_OTHER
    }
}

/// Writes the JSON report (and whatever else was collected) and builds the
/// outcome.
#[allow(clippy::too_many_arguments)]
pub(crate) fn finish<C: Serialize, R: Serialize>(
    ctx: &Context,
    command: &'static str,
    config: &C,
    results: &R,
    mut outputs: Outputs,
    started: Instant,
    status: Status,
    summary: String,
) -> Result<Outcome> {
    let report = Report {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config,
        results,
        runtime_seconds: ctx.timing.then(|| started.elapsed().as_secs_f64()),
    };
    outputs.json(&format!("{command}.json"), &report)?;
    let files = outputs.write_all(&ctx.out_dir)?;
    Ok(Outcome { status, files, summary })
}
