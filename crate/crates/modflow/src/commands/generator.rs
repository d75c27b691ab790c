//! Closed-form generators against the finite-difference oracle over a
//! matrix of `(n, beta, bump shape)` cells, with the global correction sign
//! resolved from the whole matrix.

use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use clap::{Args, ValueEnum};
use modflow_core::bygen::{
    delta_n_with, oracle_errors, resolve_correction_sign, Bump, BumpShape, CorrectionSign, DeltaOptions, GeneratorSpec,
    OracleErrors,
};
use modflow_core::lcgeom::HalfLineAxis;
use modflow_core::specfun::Grid1D;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{finish, Context, Outcome, Status};
use crate::config::{parse_enum_list, Layers, List};
use crate::output::{real, Outputs, Table};

pub const KEYS: &[&str] = &[
    "n",
    "beta",
    "f",
    "grid-size",
    "grid-lo",
    "grid-hi",
    "center",
    "width",
    "jitter",
    "h",
    "tolerance",
    "sign",
    "anchored",
    "csv-stride",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeArg {
    Gaussian,
    OddGaussian,
    Modulated,
    Smooth,
    Zero,
}

impl ShapeArg {
    pub fn shape(self) -> BumpShape {
        match self {
            ShapeArg::Gaussian => BumpShape::Gaussian,
            ShapeArg::OddGaussian => BumpShape::OddGaussian,
            ShapeArg::Modulated => BumpShape::Modulated,
            ShapeArg::Smooth => BumpShape::Smooth,
            ShapeArg::Zero => BumpShape::Zero,
        }
    }

    pub fn name(self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignArg {
    /// Pick the sign that the oracle singles out.
    Auto,
    Plus,
    Minus,
}

#[derive(Args, Clone, Debug, Default)]
pub struct GeneratorArgs {
    /// Scaling dimensions, e.g. `0..3` or `0,2`.
    #[arg(long)]
    pub n: Option<List<u32>>,
    #[arg(long)]
    pub beta: Option<List<f64>>,
    /// Bump shapes: gaussian, odd-gaussian, modulated, smooth, zero.
    #[arg(long)]
    pub f: Option<List<String>>,
    #[arg(long)]
    pub grid_size: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_hi: Option<f64>,
    #[arg(long)]
    pub center: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    /// Each cell's bump center is moved by up to this much, drawn from `--seed`.
    #[arg(long)]
    pub jitter: Option<f64>,
    /// Oracle step in the flow parameter.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum)]
    pub sign: Option<SignArg>,
    /// Subtract the Taylor polynomial of each correction at the origin.
    #[arg(long)]
    pub anchored: Option<bool>,
    /// Write every k-th grid point of the generator outputs.
    #[arg(long)]
    pub csv_stride: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorConfig {
    pub n: List<u32>,
    pub beta: List<f64>,
    pub f: Vec<ShapeArg>,
    pub grid_size: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub center: f64,
    pub width: f64,
    pub jitter: f64,
    pub h: f64,
    pub tolerance: f64,
    pub sign: SignArg,
    pub anchored: bool,
    pub csv_stride: usize,
    pub seed: u64,
}

pub fn resolve(args: &GeneratorArgs, ctx: &Context) -> Result<GeneratorConfig> {
    let l = Layers::new(&ctx.file, "generator");
    let shapes: List<String> = l.get(args.f.clone(), "f", "gaussian,odd-gaussian,modulated".parse()?)?;
    let cfg = GeneratorConfig {
        n: l.get(args.n.clone(), "n", "0..3".parse()?)?,
        beta: l.get(args.beta.clone(), "beta", List::of([0.5, 1.0, 2.0]))?,
        f: parse_enum_list(&shapes)?,
        grid_size: l.get(args.grid_size, "grid-size", 4096)?,
        grid_lo: l.get(args.grid_lo, "grid-lo", -0.5)?,
        grid_hi: l.get(args.grid_hi, "grid-hi", 7.5)?,
        center: l.get(args.center, "center", 2.5)?,
        width: l.get(args.width, "width", 0.3)?,
        jitter: l.get(args.jitter, "jitter", 0.0)?,
        h: l.get(args.h, "h", 1e-3)?,
        tolerance: l.get(args.tolerance, "tolerance", 1e-4)?,
        sign: l.get_enum(args.sign, "sign", SignArg::Auto)?,
        anchored: l.get(args.anchored, "anchored", true)?,
        csv_stride: l.get(args.csv_stride, "csv-stride", 16)?,
        seed: ctx.seed,
    };
    if !(cfg.tolerance > 0.0 && cfg.h > 0.0 && cfg.width > 0.0 && cfg.jitter >= 0.0) {
        bail!("tolerance, h and width must be positive and jitter non-negative");
    }
    if cfg.csv_stride == 0 {
        bail!("csv-stride must be at least 1");
    }
    Ok(cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub n: u32,
    pub beta: f64,
    pub shape: ShapeArg,
    pub center: f64,
    pub errors: OracleErrors,
    /// Error under the sign actually used.
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    pub sign_used: CorrectionSign,
    /// Signs meeting the tolerance in every cell.
    pub passing: Vec<CorrectionSign>,
    /// Whether exactly one sign passes.
    pub unique: bool,
    pub anchored: bool,
    pub max_error_plus: f64,
    pub max_error_minus: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorResults {
    pub cells: Vec<Cell>,
    pub resolution: Resolution,
}

struct Plan {
    n: u32,
    beta: f64,
    shape: ShapeArg,
    center: f64,
}

fn plan(cfg: &GeneratorConfig) -> Vec<Plan> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for &n in cfg.n.iter() {
        for &beta in cfg.beta.iter() {
            for &shape in &cfg.f {
                let u: f64 = rng.random_range(-1.0..=1.0);
                out.push(Plan {
                    n,
                    beta,
                    shape,
                    center: cfg.center + cfg.jitter * u,
                });
            }
        }
    }
    out
}

pub fn compute(cfg: &GeneratorConfig) -> Result<(GeneratorResults, Table, Status)> {
    let grid = Grid1D::new(cfg.grid_lo, cfg.grid_hi, cfg.grid_size)?;
    let plans = plan(cfg);
    let sample = |p: &Plan| -> Result<_> {
        let f = Bump::new(p.shape.shape(), p.center, cfg.width)
            .sample(grid)
            .with_context(|| format!("bump {:?} at {}", p.shape, p.center))?;
        Ok((f, GeneratorSpec::new(HalfLineAxis::Plus, p.n, p.beta)?))
    };
    let errors: Vec<OracleErrors> = plans
        .par_iter()
        .map(|p| {
            let (f, spec) = sample(p)?;
            oracle_errors(&f, &spec, cfg.h).with_context(|| format!("oracle for n = {}, beta = {}", p.n, p.beta))
        })
        .collect::<Result<_>>()?;

    let r = resolve_correction_sign(&errors, cfg.anchored, cfg.tolerance);
    let mut passing = Vec::new();
    if r.max_error_plus <= cfg.tolerance {
        passing.push(CorrectionSign::Plus);
    }
    if r.max_error_minus <= cfg.tolerance {
        passing.push(CorrectionSign::Minus);
    }
    let (sign_used, status) = match cfg.sign {
        SignArg::Plus | SignArg::Minus => {
            let s = if cfg.sign == SignArg::Plus {
                CorrectionSign::Plus
            } else {
                CorrectionSign::Minus
            };
            (
                s,
                if passing.contains(&s) {
                    Status::Success
                } else {
                    Status::ConventionFailure
                },
            )
        }
        SignArg::Auto => match passing.first() {
            Some(&s) => (r.winner.unwrap_or(s), Status::Success),
            None => (CorrectionSign::Plus, Status::ConventionFailure),
        },
    };

    let opts = DeltaOptions {
        sign: sign_used,
        anchored: cfg.anchored,
    };
    let samples: Vec<Vec<Vec<String>>> = plans
        .par_iter()
        .map(|p| {
            let (f, spec) = sample(p)?;
            let d = delta_n_with(&f, &spec, &opts)?;
            Ok(grid
                .points()
                .zip(d.values())
                .step_by(cfg.csv_stride)
                .map(|(x, v)| {
                    vec![
                        p.n.to_string(),
                        real(p.beta),
                        p.shape.name(),
                        real(x),
                        real(v.re),
                        real(v.im),
                    ]
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["n", "beta", "shape", "x", "re", "im"]);
    for rows in samples {
        for row in rows {
            table.push(row);
        }
    }

    let cells = plans
        .iter()
        .zip(errors)
        .map(|(p, e)| Cell {
            n: p.n,
            beta: p.beta,
            shape: p.shape,
            center: p.center,
            error: e.get(sign_used, cfg.anchored),
            errors: e,
        })
        .collect();
    let results = GeneratorResults {
        cells,
        resolution: Resolution {
            sign_used,
            unique: passing.len() == 1,
            passing,
            anchored: cfg.anchored,
            max_error_plus: r.max_error_plus,
            max_error_minus: r.max_error_minus,
            tolerance: cfg.tolerance,
        },
    };
    Ok((results, table, status))
}

pub fn run(args: &GeneratorArgs, ctx: &Context) -> Result<Outcome> {
    let started = Instant::now();
    let cfg = resolve(args, ctx)?;
    let (results, table, status) = compute(&cfg)?;
    let mut out = Outputs::default();
    out.csv("generator.csv", &table)?;
    let res = &results.resolution;
    let summary = match status {
        Status::Success => format!(
            "generator: {} cells, sign {:?} (unique: {}), max error {:.3e}",
            results.cells.len(),
            res.sign_used,
            res.unique,
            results.cells.iter().map(|c| c.error).fold(0.0, f64::max)
        ),
        _ => format!(
            "generator: no sign meets tolerance {:.1e} (plus {:.3e}, minus {:.3e})",
            res.tolerance, res.max_error_plus, res.max_error_minus
        ),
    };
    finish(ctx, "generator", &cfg, &results, out, started, status, summary)
}
