//! Orbits of the geometric and thermal flows, group-law residuals and the
//! distance to the zero-temperature limit.

use std::f64::consts::PI;
use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use clap::{Args, ValueEnum};
use modflow_core::byflow::{flow_region, nu_plus, FlowKind, FlowSpec};
use modflow_core::lcgeom::{conformal_dc_flow, HalfLineAxis, LightConePoint, Region};
use modflow_core::Interval;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{finish, Context, Outcome, Status};
use crate::config::{Layers, List};
use crate::output::{real, Outputs, Table};
use crate::svg::{self, Panel, Series};

pub const KEYS: &[&str] = &[
    "kind",
    "region",
    "beta",
    "t",
    "t-min",
    "t-max",
    "steps",
    "x",
    "xm",
    "group-samples",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Dilation,
    Boost,
    ConformalDc,
    /// `nu_plus` on both coordinates (forward cone).
    ByPlus,
    /// `nu_minus` on both coordinates (backward cone).
    ByMinus,
    /// Thermal flow of `--region`.
    Thermal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionArg {
    RightWedge,
    LeftWedge,
    ForwardCone,
    BackwardCone,
    /// The standard double cone, `|x_pm| < 1`.
    DoubleCone,
    HalfLinePlus,
    HalfLineMinus,
}

impl RegionArg {
    fn region(self) -> Region {
        match self {
            RegionArg::RightWedge => Region::RightWedge,
            RegionArg::LeftWedge => Region::LeftWedge,
            RegionArg::ForwardCone => Region::ForwardCone,
            RegionArg::BackwardCone => Region::BackwardCone,
            RegionArg::DoubleCone => Region::DoubleCone {
                minus: Interval::new(-1.0, 0.0),
                plus: Interval::new(0.0, 1.0),
            },
            RegionArg::HalfLinePlus => Region::HalfLinePlus,
            RegionArg::HalfLineMinus => Region::HalfLineMinus,
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct FlowArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Region whose thermal flow `--kind thermal` uses.
    #[arg(long, value_enum)]
    pub region: Option<RegionArg>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// A single flow time (also `--s`); overrides the range.
    #[arg(long, visible_alias = "s", allow_hyphen_values = true)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Initial `x_plus` values, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<List<f64>>,
    /// Initial `x_minus` values; defaults to `--x`.
    #[arg(long, allow_hyphen_values = true)]
    pub xm: Option<List<f64>>,
    /// Random `(s, t, point)` triples for the group-law check.
    #[arg(long)]
    pub group_samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowConfig {
    pub kind: KindArg,
    pub region: RegionArg,
    pub beta: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
    pub x: List<f64>,
    pub xm: List<f64>,
    pub group_samples: usize,
    pub seed: u64,
}

pub fn resolve(args: &FlowArgs, ctx: &Context) -> Result<FlowConfig> {
    let l = Layers::new(&ctx.file, "flow");
    let kind = l.get_enum(args.kind, "kind", KindArg::ByPlus)?;
    let default_region = match kind {
        KindArg::Dilation | KindArg::ByPlus => RegionArg::ForwardCone,
        KindArg::ByMinus => RegionArg::BackwardCone,
        KindArg::ConformalDc => RegionArg::DoubleCone,
        KindArg::Boost | KindArg::Thermal => RegionArg::RightWedge,
    };
    let region = l.get_enum(args.region, "region", default_region)?;
    let beta = l.get(args.beta, "beta", 1.0)?;
    let (t_min, t_max, steps) = match l.get_opt(args.t, "t")? {
        Some(t) => (t, t, 1),
        None => (
            l.get(args.t_min, "t-min", -0.25)?,
            l.get(args.t_max, "t-max", 0.25)?,
            l.get(args.steps, "steps", 21)?,
        ),
    };
    let x = l.get(args.x.clone(), "x", List::of([0.25, 0.5, 0.75]))?;
    let xm = l.get(args.xm.clone(), "xm", x.clone())?;
    if x.len() != xm.len() {
        bail!("--x and --xm need the same number of values");
    }
    if steps == 0 || t_max < t_min {
        bail!("need steps >= 1 and t-min <= t-max");
    }
    if !(beta > 0.0) {
        bail!("beta must be positive");
    }
    Ok(FlowConfig {
        kind,
        region,
        beta,
        t_min,
        t_max,
        steps,
        x,
        xm,
        group_samples: l.get(args.group_samples, "group-samples", 1000)?,
        seed: ctx.seed,
    })
}

fn spec(cfg: &FlowConfig) -> Result<FlowSpec> {
    let region = cfg.region.region();
    Ok(match cfg.kind {
        KindArg::Dilation => FlowSpec::geometric(FlowKind::Dilation, region),
        KindArg::Boost => FlowSpec::geometric(FlowKind::Boost, region),
        KindArg::ConformalDc => FlowSpec::geometric(FlowKind::ConformalDc, region),
        KindArg::ByPlus => FlowSpec::thermal(cfg.beta, Region::ForwardCone)?,
        KindArg::ByMinus => FlowSpec::thermal(cfg.beta, Region::BackwardCone)?,
        KindArg::Thermal => FlowSpec::thermal(cfg.beta, region)?,
    })
}

/// Zero-temperature counterpart of a thermal flow: each constrained
/// coordinate is scaled by `e^{-+2 pi t}`.
fn limit(region: &Region, t: f64, q: LightConePoint) -> LightConePoint {
    let scale = |axis: Option<HalfLineAxis>, x: f64| match axis {
        Some(HalfLineAxis::Plus) => (-2.0 * PI * t).exp() * x,
        Some(HalfLineAxis::Minus) => (2.0 * PI * t).exp() * x,
        None => x,
    };
    let (am, ap) = region.thermal_axes();
    LightConePoint::new(scale(ap, q.xp), scale(am, q.xm))
}

fn times(cfg: &FlowConfig) -> Vec<f64> {
    if cfg.steps == 1 {
        return vec![cfg.t_min];
    }
    let dt = (cfg.t_max - cfg.t_min) / (cfg.steps - 1) as f64;
    (0..cfg.steps).map(|i| cfg.t_min + dt * i as f64).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupLaw {
    pub samples: usize,
    /// Triples where some leg left the admissible domain.
    pub skipped: usize,
    pub max_abs_error: f64,
    /// Relative to `max(|x|, 1)`.
    pub max_rel_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowResults {
    pub orbit_rows: usize,
    pub group_law: GroupLaw,
    /// Largest coordinate distance between thermal orbits and their
    /// zero-temperature limit; absent for geometric flows.
    pub limit_discrepancy: Option<f64>,
}

fn group_law(spec: &FlowSpec, cfg: &FlowConfig) -> GroupLaw {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = if cfg.t_max > cfg.t_min {
        (cfg.t_min, cfg.t_max)
    } else {
        (-0.25, 0.25)
    };
    let (mut skipped, mut abs, mut rel) = (0, 0.0f64, 0.0f64);
    for _ in 0..cfg.group_samples {
        let s = rng.random_range(lo..=hi);
        let t = rng.random_range(lo..=hi);
        let i = rng.random_range(0..cfg.x.len());
        let q = LightConePoint::new(cfg.x[i], cfg.xm[i]);
        let pair = flow_region(spec, t, q)
            .and_then(|m| flow_region(spec, s, m))
            .and_then(|a| flow_region(spec, s + t, q).map(|b| (a, b)));
        match pair {
            Ok((a, b)) => {
                for (u, v) in [(a.xp, b.xp), (a.xm, b.xm)] {
                    abs = abs.max((u - v).abs());
                    rel = rel.max((u - v).abs() / v.abs().max(1.0));
                }
            }
            Err(_) => skipped += 1,
        }
    }
    GroupLaw {
        samples: cfg.group_samples,
        skipped,
        max_abs_error: abs,
        max_rel_error: rel,
    }
}

fn orbit_svg(cfg: &FlowConfig, ts: &[f64]) -> String {
    let span: Vec<f64> = if ts.len() > 1 {
        ts.to_vec()
    } else {
        (0..=40).map(|i| -2.0 + 0.1 * i as f64).collect()
    };
    let conformal = cfg
        .x
        .iter()
        .filter(|x| x.abs() < 1.0)
        .map(|&x| Series {
            name: format!("x = {x}"),
            points: span
                .iter()
                .filter_map(|&s| conformal_dc_flow(s, x).ok().map(|v| (s, v)))
                .collect(),
        })
        .collect();
    let thermal = cfg
        .x
        .iter()
        .map(|&x| Series {
            name: format!("x = {x}"),
            points: span
                .iter()
                .filter_map(|&t| nu_plus(t, x, cfg.beta).ok().map(|v| (t, v)))
                .collect(),
        })
        .collect();
    svg::render(&[
        Panel {
            title: "double-cone conformal flow".into(),
            x_label: "s".into(),
            y_label: "x".into(),
            log_y: false,
            series: conformal,
        },
        Panel {
            title: format!("thermal flow nu_plus, beta = {}", cfg.beta),
            x_label: "t".into(),
            y_label: "x".into(),
            log_y: false,
            series: thermal,
        },
    ])
}

pub fn run(args: &FlowArgs, ctx: &Context) -> Result<Outcome> {
    let started = Instant::now();
    let cfg = resolve(args, ctx)?;
    let spec = spec(&cfg)?;
    let thermal = matches!(spec.kind, FlowKind::Thermal(_));
    let ts = times(&cfg);

    let mut header = vec!["point", "t", "xp", "xm"];
    if thermal {
        header.extend(["limit_xp", "limit_xm"]);
    }
    let mut table = Table::new(&header);
    let mut discrepancy: f64 = 0.0;
    for (i, (&xp, &xm)) in cfg.x.iter().zip(cfg.xm.iter()).enumerate() {
        let q = LightConePoint::new(xp, xm);
        for &t in &ts {
            let r =
                flow_region(&spec, t, q).with_context(|| format!("orbit of point {i} = ({xp}, {xm}) at t = {t}"))?;
            let mut row = vec![i.to_string(), real(t), real(r.xp), real(r.xm)];
            if thermal {
                let l = limit(&spec.region, t, q);
                discrepancy = discrepancy.max((l.xp - r.xp).abs()).max((l.xm - r.xm).abs());
                row.extend([real(l.xp), real(l.xm)]);
            }
            table.push(row);
        }
    }
    let results = FlowResults {
        orbit_rows: table.rows.len(),
        group_law: group_law(&spec, &cfg),
        limit_discrepancy: thermal.then_some(discrepancy),
    };
    let mut out = Outputs::default();
    out.csv("flow.csv", &table)?;
    out.text("flow.svg", orbit_svg(&cfg, &ts));
    let summary = format!(
        "flow {:?}: {} orbit rows, group-law max error {:.3e}",
        cfg.kind, results.orbit_rows, results.group_law.max_rel_error
    );
    finish(ctx, "flow", &cfg, &results, out, started, Status::Success, summary)
}
