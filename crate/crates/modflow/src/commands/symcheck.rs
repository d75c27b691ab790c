//! Sampled symbol-class checks for polynomial test symbols and the concrete
//! multiplier symbols of the flows.

use std::time::Instant;

use anyhow::{Context as _, Result};
use clap::{Args, ValueEnum};
use modflow_core::lcgeom::HalfLineAxis;
use modflow_core::symcheck::{
    check_symbol_estimate, paper_symbol, CheckOptions, ExponentReading, PaperSymbol, Symbol, SymbolClaim, SymbolReport,
};
use modflow_core::{Complex64, Interval};

use rayon::prelude::*;
use serde::Serialize;

use super::{finish, Context, Outcome, Status};
use crate::config::{parse_enum_list, Layers, List};
use crate::output::{real, Outputs, Table};

pub const KEYS: &[&str] = &[
    "symbol",
    "claim-order",
    "rho",
    "delta",
    "max-alpha",
    "max-beta",
    "xi-max",
    "n",
    "beta",
    "m",
    "x-lo",
    "x-hi",
    "slack",
    "reading",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolArg {
    /// `1`
    Polynomial0,
    /// `xi`
    Polynomial1,
    /// `xi^2`
    Polynomial2,
    /// `xi^3`
    Polynomial3,
    /// Massive multiplication symbol along the diagonal ray of momentum space.
    YngvasonDr,
    /// Massive multiplication symbol along the energy axis at `p1 = 1`.
    YngvasonDrEnergy,
    /// Correction multiplier `a^{(n)}(xi)`.
    ByMultiplier,
    /// Correction symbol with its `x` dependence.
    ByHoermander,
}

impl SymbolArg {
    pub fn name(self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadingArg {
    /// Summand exponent `k`.
    K,
    /// Summand exponent `n + 1`.
    NPlusOne,
    Both,
}

impl ReadingArg {
    fn readings(self) -> Vec<ExponentReading> {
        match self {
            ReadingArg::K => vec![ExponentReading::K],
            ReadingArg::NPlusOne => vec![ExponentReading::NPlusOne],
            ReadingArg::Both => vec![ExponentReading::K, ExponentReading::NPlusOne],
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct SymcheckArgs {
    /// Symbols to check, comma separated.
    #[arg(long)]
    pub symbol: Option<List<String>>,
    #[arg(long, allow_hyphen_values = true)]
    pub claim_order: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Highest `xi` derivative checked (at most 4).
    #[arg(long)]
    pub max_alpha: Option<u32>,
    /// Highest `x` derivative checked (at most 4).
    #[arg(long)]
    pub max_beta: Option<u32>,
    #[arg(long)]
    pub xi_max: Option<f64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_hi: Option<f64>,
    /// Allowed excess of a fitted exponent over its bound.
    #[arg(long)]
    pub slack: Option<f64>,
    /// Which summand exponent the multiplier symbol uses.
    #[arg(long, value_enum)]
    pub reading: Option<ReadingArg>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymcheckConfig {
    pub symbol: Vec<SymbolArg>,
    pub claim: SymbolClaim,
    pub options: CheckOptions,
    pub n: u32,
    pub beta: f64,
    pub m: f64,
    pub reading: ReadingArg,
}

pub fn resolve(args: &SymcheckArgs, ctx: &Context) -> Result<SymcheckConfig> {
    let l = Layers::new(&ctx.file, "symcheck");
    let names: List<String> = l.get(
        args.symbol.clone(),
        "symbol",
        "yngvason-dr,by-multiplier,by-hoermander".parse()?,
    )?;
    let window = Interval::new(l.get(args.x_lo, "x-lo", 0.0)?, l.get(args.x_hi, "x-hi", 1.0)?);
    let claim = SymbolClaim::new(
        l.get(args.claim_order, "claim-order", 0.0)?,
        l.get(args.rho, "rho", 1.0)?,
        l.get(args.delta, "delta", 0.5)?,
        window,
        l.get(args.max_alpha, "max-alpha", 3)?,
        l.get(args.max_beta, "max-beta", 3)?,
    )?;
    let options = CheckOptions {
        xi_max: l.get(args.xi_max, "xi-max", 1e4)?,
        slack: l.get(args.slack, "slack", CheckOptions::default().slack)?,
        ..CheckOptions::default()
    };
    Ok(SymcheckConfig {
        symbol: parse_enum_list(&names)?,
        claim,
        options,
        n: l.get(args.n, "n", 3)?,
        beta: l.get(args.beta, "beta", 1.0)?,
        m: l.get(args.m, "m", 1.0)?,
        reading: l.get_enum(args.reading, "reading", ReadingArg::Both)?,
    })
}

/// A symbol instance as it was checked.
#[derive(Clone, Copy, Debug)]
enum Target {
    Power(i32),
    Paper(PaperSymbol),
}

impl Symbol for Target {
    fn eval(&self, x: f64, xi: f64) -> Complex64 {
        match self {
            Target::Power(k) => Complex64::new(xi.powi(*k), 0.0),
            Target::Paper(p) => p.eval(x, xi),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolResult {
    pub symbol: SymbolArg,
    /// Set for the multiplier symbol, whose summand exponent has two readings.
    pub reading: Option<ExponentReading>,
    /// Full parameters of a multiplier symbol.
    pub parameters: Option<PaperSymbol>,
    pub report: SymbolReport,
}

fn targets(cfg: &SymcheckConfig, s: SymbolArg) -> Result<Vec<(Option<ExponentReading>, Target)>> {
    let paper = |p: PaperSymbol| -> Result<Target> { Ok(Target::Paper(paper_symbol(p)?)) };
    Ok(match s {
        SymbolArg::Polynomial0 => vec![(None, Target::Power(0))],
        SymbolArg::Polynomial1 => vec![(None, Target::Power(1))],
        SymbolArg::Polynomial2 => vec![(None, Target::Power(2))],
        SymbolArg::Polynomial3 => vec![(None, Target::Power(3))],
        SymbolArg::YngvasonDr => vec![(None, paper(PaperSymbol::yngvason_radial(cfg.m))?)],
        SymbolArg::YngvasonDrEnergy => vec![(
            None,
            paper(PaperSymbol::YngvasonDr {
                mass: cfg.m,
                offset: [0.0, 1.0, 0.0],
                direction: [1.0, 0.0, 0.0],
            })?,
        )],
        SymbolArg::ByMultiplier => cfg
            .reading
            .readings()
            .into_iter()
            .map(|reading| {
                let p = PaperSymbol::ByMultiplier {
                    n: cfg.n,
                    beta: cfg.beta,
                    axis: HalfLineAxis::Plus,
                    reading,
                };
                Ok((Some(reading), paper(p)?))
            })
            .collect::<Result<_>>()?,
        SymbolArg::ByHoermander => vec![(None, paper(PaperSymbol::by_hoermander(cfg.n, cfg.beta))?)],
    })
}

pub fn compute(cfg: &SymcheckConfig) -> Result<Vec<SymbolResult>> {
    let mut jobs = Vec::new();
    for &s in &cfg.symbol {
        for (reading, target) in targets(cfg, s).with_context(|| format!("symbol {}", s.name()))? {
            jobs.push((s, reading, target));
        }
    }
    jobs.par_iter()
        .map(|&(symbol, reading, target)| {
            let report = check_symbol_estimate(&target, &cfg.claim, &cfg.options)
                .with_context(|| format!("checking {}", symbol.name()))?;
            Ok(SymbolResult {
                symbol,
                reading,
                parameters: match target {
                    Target::Paper(p) => Some(p),
                    Target::Power(_) => None,
                },
                report,
            })
        })
        .collect()
}

fn reading_name(r: Option<ExponentReading>) -> &'static str {
    match r {
        None => "",
        Some(ExponentReading::K) => "k",
        Some(ExponentReading::NPlusOne) => "n-plus-one",
    }
}

fn table(results: &[SymbolResult]) -> Table {
    let mut t = Table::new(&[
        "symbol", "reading", "alpha", "beta", "exponent", "constant", "bound", "residual", "status",
    ]);
    let opt = |v: Option<f64>| v.map(real).unwrap_or_default();
    for r in results {
        for e in &r.report.entries {
            t.push(vec![
                r.symbol.name(),
                reading_name(r.reading).into(),
                e.alpha.to_string(),
                e.beta.to_string(),
                opt(e.exponent),
                opt(e.constant),
                real(e.bound),
                real(e.residual),
                format!("{:?}", e.status).to_lowercase(),
            ]);
        }
    }
    t
}

pub fn run(args: &SymcheckArgs, ctx: &Context) -> Result<Outcome> {
    let started = Instant::now();
    let cfg = resolve(args, ctx)?;
    let results = compute(&cfg)?;
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.report.pass)
        .map(|r| match r.reading {
            Some(_) => format!("{} ({})", r.symbol.name(), reading_name(r.reading)),
            None => r.symbol.name(),
        })
        .collect();
    let status = if failed.is_empty() {
        Status::Success
    } else {
        Status::SymbolFailure
    };
    let summary = if failed.is_empty() {
        format!(
            "symcheck: {} checks consistent with order {}",
            results.len(),
            cfg.claim.order
        )
    } else {
        format!(
            "symcheck: order {} claim fails for {}",
            cfg.claim.order,
            failed.join(", ")
        )
    };
    let mut out = Outputs::default();
    out.csv("symcheck.csv", &table(&results))?;
    finish(ctx, "symcheck", &cfg, &results, out, started, status, summary)
}
