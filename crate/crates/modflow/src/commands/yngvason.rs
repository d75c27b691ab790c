//! Oracle decomposition of the wedge flow's generator into boost and
//! multiplication parts, with the boost prefactor and ratio orientation
//! resolved from the oracle.

use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use clap::Args;
use modflow_core::yngvason::{
    dr_symbol, resolve_yngvason_conventions, v_flow, yngvason_decomposition, BoostPrefactor, DecompositionRun,
    MomentumGrid3, YngvasonConventions, YngvasonFactor,
};
use serde::Serialize;

use super::{finish, Context, Outcome, Status};
use crate::config::{Layers, List};
use crate::output::{real, Outputs, Table};

pub const KEYS: &[&str] = &[
    "m",
    "grid-size",
    "half-width",
    "sigma",
    "cut",
    "center",
    "h",
    "tolerance",
    "lambda",
    "symbol-samples",
];

#[derive(Args, Clone, Debug, Default)]
pub struct YngvasonArgs {
    /// Masses, comma separated.
    #[arg(long)]
    pub m: Option<List<f64>>,
    /// Points per momentum axis.
    #[arg(long)]
    pub grid_size: Option<usize>,
    /// Each axis covers `[-half_width, half_width)`.
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Gaussian support is declared cut at this radius around the center.
    #[arg(long)]
    pub cut: Option<f64>,
    /// Gaussian center `p0,p1,p2`.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<List<f64>>,
    /// Oracle step in the flow parameter.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Boost parameters for the unitarity and displacement checks.
    #[arg(long)]
    pub lambda: Option<List<f64>>,
    /// Points per axis of the `(p0, p1)` slice written to the symbol CSV.
    #[arg(long)]
    pub symbol_samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YngvasonConfig {
    pub m: List<f64>,
    pub grid_size: usize,
    pub half_width: f64,
    pub sigma: f64,
    pub cut: f64,
    pub center: [f64; 3],
    pub h: f64,
    pub tolerance: f64,
    pub lambda: List<f64>,
    pub symbol_samples: usize,
}

pub fn resolve(args: &YngvasonArgs, ctx: &Context) -> Result<YngvasonConfig> {
    let l = Layers::new(&ctx.file, "yngvason");
    let center: List<f64> = l.get(args.center.clone(), "center", List::of([0.2, -0.1, 0.1]))?;
    let center: [f64; 3] = center
        .0
        .try_into()
        .map_err(|_| anyhow::anyhow!("center needs exactly three components"))?;
    let cfg = YngvasonConfig {
        m: l.get(args.m.clone(), "m", List::of([0.5, 1.0, 2.0]))?,
        grid_size: l.get(args.grid_size, "grid-size", 128)?,
        half_width: l.get(args.half_width, "half-width", 7.0)?,
        sigma: l.get(args.sigma, "sigma", 1.0)?,
        cut: l.get(args.cut, "cut", 4.0)?,
        center,
        h: l.get(args.h, "h", 1e-3)?,
        tolerance: l.get(args.tolerance, "tolerance", 1e-4)?,
        lambda: l.get(args.lambda.clone(), "lambda", List::of([0.9, 1.0, 1.1]))?,
        symbol_samples: l.get(args.symbol_samples, "symbol-samples", 16)?,
    };
    if !(cfg.tolerance > 0.0 && cfg.h > 0.0 && cfg.sigma > 0.0 && cfg.half_width > 0.0) {
        bail!("tolerance, h, sigma and half-width must be positive");
    }
    Ok(cfg)
}

/// One mass: the oracle decomposition plus flow checks at each `lambda`.
#[derive(Clone, Debug, Serialize)]
pub struct MassRun {
    #[serde(flatten)]
    pub decomposition: DecompositionRun,
    /// `||multiplication term|| / ||oracle||`.
    pub dr_fraction: f64,
    pub flows: Vec<FlowCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowCheck {
    pub lambda: f64,
    /// `||V(lambda) phi - phi|| / ||phi||`.
    pub displacement: f64,
    /// Relative change of the norm weighted by `F(p) F(-p) = p0^2 + p2^2 + m^2`.
    pub unitarity_factorized: f64,
    /// Relative change of the norm weighted by `p1^2 + p2^2 + m^2`.
    pub unitarity_spatial: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConventionEntry {
    pub conventions: YngvasonConventions,
    pub max_residual: f64,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    pub entries: Vec<ConventionEntry>,
    /// The single passing convention, if exactly one passes.
    pub winner: Option<YngvasonConventions>,
    pub unique: bool,
    /// Set when every passing convention shares its boost prefactor.
    pub prefactor: Option<BoostPrefactor>,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct YngvasonResults {
    pub runs: Vec<MassRun>,
    pub resolution: Resolution,
}

fn relative_change(after: f64, before: f64) -> f64 {
    if before > 0.0 {
        (after - before).abs() / before
    } else {
        (after - before).abs()
    }
}

fn flow_checks(phi: &MomentumGrid3, m: f64, lambdas: &[f64]) -> Result<Vec<FlowCheck>> {
    let f = YngvasonFactor::new(m)?;
    let fact = |p0: f64, _p1: f64, p2: f64| p0 * p0 + p2 * p2 + m * m;
    let spatial = |_p0: f64, p1: f64, p2: f64| p1 * p1 + p2 * p2 + m * m;
    let (n_fact, n_spat, n0) = (phi.weighted_norm(fact), phi.weighted_norm(spatial), phi.l2_norm());
    lambdas
        .iter()
        .map(|&lambda| {
            let v = v_flow(lambda, phi, &f).with_context(|| format!("flow at lambda = {lambda}, m = {m}"))?;
            Ok(FlowCheck {
                lambda,
                displacement: v.l2_distance(phi)? / n0.max(f64::MIN_POSITIVE),
                unitarity_factorized: relative_change(v.weighted_norm(fact), n_fact),
                unitarity_spatial: relative_change(v.weighted_norm(spatial), n_spat),
            })
        })
        .collect()
}

fn resolution(runs: &[DecompositionRun], tolerance: f64) -> Resolution {
    let r = resolve_yngvason_conventions(runs, tolerance);
    let entries: Vec<ConventionEntry> = YngvasonConventions::ALL
        .iter()
        .zip(r.max_residuals)
        .map(|(&conventions, max_residual)| ConventionEntry {
            conventions,
            max_residual,
            passes: max_residual <= tolerance,
        })
        .collect();
    let mut boosts = entries.iter().filter(|e| e.passes).map(|e| e.conventions.boost);
    let prefactor = boosts.next().filter(|first| boosts.all(|b| b == *first));
    Resolution {
        unique: r.winner.is_some(),
        winner: r.winner,
        prefactor,
        tolerance,
        entries,
    }
}

fn symbol_table(cfg: &YngvasonConfig) -> Table {
    let mut t = Table::new(&["m", "p0", "p1", "p2", "re", "im"]);
    let k = cfg.symbol_samples.max(1);
    let step = 2.0 * cfg.half_width / k as f64;
    // Cell centres keep the massless symbol away from its pole at p0 = p2 = 0.
    let coord = |i: usize| -cfg.half_width + (i as f64 + 0.5) * step;
    for &m in cfg.m.iter() {
        for i in 0..k {
            for j in 0..k {
                let (p0, p1, p2) = (coord(i), coord(j), 0.0);
                if let Ok(v) = dr_symbol(p0, p1, p2, m) {
                    t.push(vec![real(m), real(p0), real(p1), real(p2), real(v.re), real(v.im)]);
                }
            }
        }
    }
    t
}

pub fn compute(cfg: &YngvasonConfig) -> Result<(YngvasonResults, Table, Status)> {
    let axes = MomentumGrid3::centered_axes(cfg.grid_size, cfg.half_width)?;
    let phi = MomentumGrid3::gaussian(axes, cfg.center, cfg.sigma, cfg.cut)?;
    // Masses run one after another: each run holds several full 3D grids.
    let mut decomps = Vec::new();
    let mut runs = Vec::new();
    for &m in cfg.m.iter() {
        let d = yngvason_decomposition(&phi, m, cfg.h).with_context(|| format!("decomposition at m = {m}"))?;
        let flows = flow_checks(&phi, m, &cfg.lambda)?;
        runs.push(MassRun {
            decomposition: d,
            dr_fraction: if d.oracle_norm > 0.0 {
                d.dr_norm / d.oracle_norm
            } else {
                0.0
            },
            flows,
        });
        decomps.push(d);
    }
    let resolution = resolution(&decomps, cfg.tolerance);
    let status = if resolution.entries.iter().any(|e| e.passes) {
        Status::Success
    } else {
        Status::ConventionFailure
    };
    Ok((YngvasonResults { runs, resolution }, symbol_table(cfg), status))
}

pub fn run(args: &YngvasonArgs, ctx: &Context) -> Result<Outcome> {
    let started = Instant::now();
    let cfg = resolve(args, ctx)?;
    let (results, table, status) = compute(&cfg)?;
    let mut out = Outputs::default();
    out.csv("yngvason.csv", &table)?;
    let r = &results.resolution;
    let best = r
        .entries
        .iter()
        .min_by(|a, b| a.max_residual.total_cmp(&b.max_residual))
        .map(|e| e.max_residual)
        .unwrap_or(f64::NAN);
    let summary = match (status, r.winner) {
        (Status::Success, Some(w)) => format!(
            "yngvason: {} masses, conventions {:?}/{:?}, residual {:.3e}",
            results.runs.len(),
            w.boost,
            w.ratio,
            best
        ),
        (Status::Success, None) => format!(
            "yngvason: {} masses, several conventions within {:.1e} (prefactor {})",
            results.runs.len(),
            r.tolerance,
            r.prefactor.map_or("unresolved".to_string(), |p| format!("{p:?}"))
        ),
        _ => format!("yngvason: no convention within {:.1e}, best {:.3e}", r.tolerance, best),
    };
    finish(ctx, "yngvason", &cfg, &results, out, started, status, summary)
}
