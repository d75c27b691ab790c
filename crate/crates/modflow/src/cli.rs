//! Argument parsing, setting layers and exit-code mapping.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use crate::commands::{self, exit_code_for, Context, Outcome, EXIT_OTHER};
use crate::config::ConfigFile;
use crate::output::{DEFAULT_OUT_DIR, OUT_DIR_ENV};

/// Keys every command accepts in a config file.
const GLOBAL_KEYS: &[&str] = &["out-dir", "seed", "timing"];

#[derive(Parser, Debug)]
#[command(
    name = "modflow",
    version,
    about = "Modular flows, their generators and symbol checks"
)]
pub struct Cli {
    /// Flat `key = value` file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (else config `out-dir`, else $MODFLOW_OUT_DIR, else ./modflow-out).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Seed for randomized placements.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Record wall-clock runtime in the JSON report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbits of geometric and thermal flows, with group-law residuals.
    Flow(commands::flow::FlowArgs),
    /// Closed-form generators checked against a finite-difference oracle.
    Generator(commands::generator::GeneratorArgs),
    /// Support leakage of the transported bump over `(n, t)`.
    Leakage(commands::leakage::LeakageArgs),
    /// Oracle decomposition of the wedge model's generator.
    Yngvason(commands::yngvason::YngvasonArgs),
    /// Sampled symbol-class checks.
    Symcheck(commands::symcheck::SymcheckArgs),
}

fn known_keys() -> Vec<&'static str> {
    let mut keys: Vec<&str> = GLOBAL_KEYS.to_vec();
    for k in [
        commands::flow::KEYS,
        commands::generator::KEYS,
        commands::leakage::KEYS,
        commands::yngvason::KEYS,
        commands::symcheck::KEYS,
    ] {
        keys.extend_from_slice(k);
    }
    keys
}

fn context(cli: &Cli) -> Result<Context> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    file.check_keys(&known_keys())?;
    let command = match cli.command {
        Command::Flow(_) => "flow",
        Command::Generator(_) => "generator",
        Command::Leakage(_) => "leakage",
        Command::Yngvason(_) => "yngvason",
        Command::Symcheck(_) => "symcheck",
    };
    let l = crate::config::Layers::new(&file, command);
    let env_dir = std::env::var_os(OUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from);
    let out_dir = match l.get_opt(cli.out_dir.clone(), "out-dir")? {
        Some(d) => d,
        None => env_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
    };
    let seed = l.get(cli.seed, "seed", 0)?;
    let timing = cli.timing || l.get(None, "timing", false)?;
    Ok(Context {
        file,
        out_dir,
        seed,
        timing,
    })
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let ctx = context(cli)?;
    match &cli.command {
        Command::Flow(a) => commands::flow::run(a, &ctx),
        Command::Generator(a) => commands::generator::run(a, &ctx),
        Command::Leakage(a) => commands::leakage::run(a, &ctx),
        Command::Yngvason(a) => commands::yngvason::run(a, &ctx),
        Command::Symcheck(a) => commands::symcheck::run(a, &ctx),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_OTHER } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            // A closed stdout (e.g. piped into `head`) must not turn success into a panic.
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", outcome.summary);
            for f in &outcome.files {
                let _ = writeln!(out, "  wrote {}", f.display());
            }
            outcome.status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}
