//! Fraction of the transported bump's mass found outside the transported
//! support, per `(n, t)`.

use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use clap::Args;
use modflow_core::bygen::{support_leakage, Bump, BumpShape, GeneratorSpec, LeakageReport};
use modflow_core::lcgeom::HalfLineAxis;
use modflow_core::specfun::Grid1D;
use rayon::prelude::*;
use serde::Serialize;

use super::{finish, Context, Outcome, Status};
use crate::config::{Layers, List};
use crate::output::{real, Outputs, Table};
use crate::svg::{self, Panel, Series};

pub const KEYS: &[&str] = &["n", "t", "beta", "grid-size", "grid-lo", "grid-hi", "center", "width"];

/// Leakage is plotted on a log axis; exact zeros are drawn here.
const PLOT_FLOOR: f64 = 1e-18;

#[derive(Args, Clone, Debug, Default)]
pub struct LeakageArgs {
    #[arg(long)]
    pub n: Option<List<u32>>,
    /// Flow parameters, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<List<f64>>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub grid_size: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_hi: Option<f64>,
    /// Center of the smooth compactly supported bump.
    #[arg(long)]
    pub center: Option<f64>,
    /// Half-width of the bump's support.
    #[arg(long)]
    pub width: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeakageConfig {
    pub n: List<u32>,
    pub t: List<f64>,
    pub beta: f64,
    pub grid_size: usize,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub center: f64,
    pub width: f64,
}

pub fn resolve(args: &LeakageArgs, ctx: &Context) -> Result<LeakageConfig> {
    let l = Layers::new(&ctx.file, "leakage");
    let std = Bump::standard();
    let cfg = LeakageConfig {
        n: l.get(args.n.clone(), "n", "0..2".parse()?)?,
        t: l.get(args.t.clone(), "t", List::of([-0.5, -0.25, 0.0, 0.1, 0.2, 0.3, 0.5]))?,
        beta: l.get(args.beta, "beta", 1.0)?,
        grid_size: l.get(args.grid_size, "grid-size", 4096)?,
        grid_lo: l.get(args.grid_lo, "grid-lo", -0.5)?,
        grid_hi: l.get(args.grid_hi, "grid-hi", 7.5)?,
        center: l.get(args.center, "center", std.center)?,
        width: l.get(args.width, "width", std.width)?,
    };
    if !(cfg.width > 0.0) {
        bail!("width must be positive");
    }
    Ok(cfg)
}

pub fn compute(cfg: &LeakageConfig) -> Result<Vec<LeakageReport>> {
    let grid = Grid1D::new(cfg.grid_lo, cfg.grid_hi, cfg.grid_size)?;
    let f = Bump::new(BumpShape::Smooth, cfg.center, cfg.width).sample(grid)?;
    let cells: Vec<(u32, f64)> = cfg.n.iter().flat_map(|&n| cfg.t.iter().map(move |&t| (n, t))).collect();
    cells
        .par_iter()
        .map(|&(n, t)| {
            let spec = GeneratorSpec::new(HalfLineAxis::Plus, n, cfg.beta)?;
            support_leakage(&f, t, &spec).with_context(|| format!("leakage at n = {n}, t = {t}"))
        })
        .collect()
}

fn table(rows: &[LeakageReport]) -> Table {
    let mut t = Table::new(&[
        "n",
        "t",
        "leakage",
        "mass_inside",
        "mass_outside",
        "support_lo",
        "support_hi",
    ]);
    for r in rows {
        t.push(vec![
            r.n.to_string(),
            real(r.t),
            real(r.leakage_fraction),
            real(r.mass_inside),
            real(r.mass_outside),
            real(r.transported.lo),
            real(r.transported.hi),
        ]);
    }
    t
}

fn plot(cfg: &LeakageConfig, rows: &[LeakageReport]) -> String {
    let series = cfg
        .t
        .iter()
        .map(|&t| Series {
            name: format!("t = {t}"),
            points: rows
                .iter()
                .filter(|r| r.t == t)
                .map(|r| (f64::from(r.n), r.leakage_fraction.max(PLOT_FLOOR)))
                .collect(),
        })
        .collect();
    svg::render(&[Panel {
        title: format!("support leakage, beta = {}", cfg.beta),
        x_label: "n".into(),
        y_label: "leakage".into(),
        log_y: true,
        series,
    }])
}

pub fn run(args: &LeakageArgs, ctx: &Context) -> Result<Outcome> {
    let started = Instant::now();
    let cfg = resolve(args, ctx)?;
    let rows = compute(&cfg)?;
    let mut out = Outputs::default();
    out.csv("leakage.csv", &table(&rows))?;
    out.text("leakage.svg", plot(&cfg, &rows));
    let worst = rows
        .iter()
        .max_by(|a, b| a.leakage_fraction.total_cmp(&b.leakage_fraction));
    let summary = match worst {
        Some(w) => format!(
            "leakage: {} cells, largest {:.3e} at n = {}, t = {}",
            rows.len(),
            w.leakage_fraction,
            w.n,
            w.t
        ),
        None => "leakage: no cells".into(),
    };
    finish(ctx, "leakage", &cfg, &rows, out, started, Status::Success, summary)
}
