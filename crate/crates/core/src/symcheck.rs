//! Sampled checks of pseudodifferential symbol estimates
//!
//! `|d_xi^a d_x^b p(x, xi)| <= C (1 + |xi|)^(m + delta b - rho a)`
//!
//! on a compact `x` window. Sampling can only falsify such a bound, so a
//! passing report means "consistent with order `m`" over the sampled range.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::lcgeom::HalfLineAxis;
use crate::yngvason::dr_symbol;
use crate::{Error, Interval, Result};

/// Highest derivative order the nested differences support.
pub const MAX_DERIVATIVE: u32 = 4;
pub const DEFAULT_SLACK: f64 = 0.15;

/// A symbol `p(x, xi)`.
pub trait Symbol {
    fn eval(&self, x: f64, xi: f64) -> Complex64;
}

impl<F> Symbol for F
where
    F: Fn(f64, f64) -> Complex64,
{
    fn eval(&self, x: f64, xi: f64) -> Complex64 {
        self(x, xi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymbolClaim {
    pub order: f64,
    pub rho: f64,
    pub delta: f64,
    pub x_window: Interval,
    pub max_alpha: u32,
    pub max_beta: u32,
}

impl SymbolClaim {
    pub fn new(order: f64, rho: f64, delta: f64, x_window: Interval, max_alpha: u32, max_beta: u32) -> Result<Self> {
        let c = Self {
            order,
            rho,
            delta,
            x_window,
            max_alpha,
            max_beta,
        };
        c.validate()?;
        Ok(c)
    }

    /// Type `(1, 1/2)` with derivatives up to second order on both sides.
    pub fn standard(order: f64, x_window: Interval) -> Self {
        Self {
            order,
            rho: 1.0,
            delta: 0.5,
            x_window,
            max_alpha: 2,
            max_beta: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.order.is_finite() {
            return Err(Error::InvalidParameter("claimed order must be finite"));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::InvalidParameter("rho must lie in (0, 1]"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0 && self.delta <= self.rho) {
            return Err(Error::InvalidParameter("delta must lie in (0, 1) and not exceed rho"));
        }
        if self.x_window.is_empty() || !self.x_window.lo.is_finite() || !self.x_window.hi.is_finite() {
            return Err(Error::InvalidParameter("x window must be a bounded interval"));
        }
        if self.max_alpha > MAX_DERIVATIVE || self.max_beta > MAX_DERIVATIVE {
            return Err(Error::InvalidParameter("derivative orders are capped at 4"));
        }
        Ok(())
    }

    /// `m + delta b - rho a`.
    pub fn bound_exponent(&self, alpha: u32, beta: u32) -> f64 {
        self.order + self.delta * beta as f64 - self.rho * alpha as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckOptions {
    pub xi_max: f64,
    pub slack: f64,
    /// Geometric samples per doubling of `|xi|`.
    pub samples_per_octave: usize,
    pub x_samples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            xi_max: 1e4,
            slack: DEFAULT_SLACK,
            samples_per_octave: 8,
            x_samples: 9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EntryStatus {
    Pass,
    Fail,
    /// The derivative is indistinguishable from rounding noise on too many
    /// samples to fit an exponent. Such an entry does not fail the claim.
    NoiseFloor,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateEntry {
    pub alpha: u32,
    pub beta: u32,
    /// Fitted decay exponent, when enough samples rise above the noise.
    pub exponent: Option<f64>,
    /// `max |d p| / (1 + |xi|)^bound` over the usable samples.
    pub constant: Option<f64>,
    pub bound: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub status: EntryStatus,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymbolReport {
    pub estimated_order: f64,
    pub entries: Vec<EstimateEntry>,
    pub pass: bool,
}

impl SymbolReport {
    pub fn entry(&self, alpha: u32, beta: u32) -> Option<&EstimateEntry> {
        self.entries.iter().find(|e| e.alpha == alpha && e.beta == beta)
    }
}

fn xi_samples(xi_max: f64, per_octave: usize) -> Vec<f64> {
    let lo = xi_max / 10.0;
    let count = (per_octave as f64 * 10f64.log2()).ceil() as usize + 1;
    (0..count)
        .map(|j| lo * (xi_max / lo).powf(j as f64 / (count - 1) as f64))
        .collect()
}

fn x_samples(w: Interval, count: usize) -> Vec<f64> {
    if count <= 1 || w.len() == 0.0 {
        return alloc::vec![(w.lo + w.hi) / 2.0];
    }
    (0..count)
        .map(|j| w.lo + w.len() * j as f64 / (count - 1) as f64)
        .collect()
}

/// Least-squares slope of `y` against `x`, and the RMS residual.
fn fit_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    (slope, (rss / n).sqrt())
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Central difference weights and offsets (in units of `h`) for the
/// `order`-th derivative: `sum_j (-1)^j C(order, j) f(x + (order/2 - j) h) / h^order`.
fn central_stencil(order: u32) -> Vec<(f64, f64)> {
    (0..=order)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            (order as f64 / 2.0 - j as f64, sign * binomial(order, j))
        })
        .collect()
}

/// Step `eps^(1/(order + 2)) (1 + |v|)` balancing truncation against
/// rounding for an `order`-th central difference.
pub fn default_step(order: u32, v: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (order as f64 + 2.0)) * (1.0 + v.abs())
}

/// Nested central difference for `d_xi^alpha d_x^beta p` at `(x, xi)`
/// with explicit steps. Also returns the rounding-noise estimate
/// `eps * sum |w f| / (h_xi^alpha h_x^beta)`.
pub fn mixed_derivative<S: Symbol + ?Sized>(
    symbol: &S,
    x: f64,
    xi: f64,
    alpha: u32,
    beta: u32,
    h_x: f64,
    h_xi: f64,
) -> Result<(Complex64, f64)> {
    if alpha > MAX_DERIVATIVE || beta > MAX_DERIVATIVE {
        return Err(Error::InvalidParameter("derivative orders are capped at 4"));
    }
    if !(h_x > 0.0 && h_xi > 0.0) {
        return Err(Error::InvalidParameter("difference steps must be positive"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for (sx, wx) in central_stencil(beta) {
        for (sk, wk) in central_stencil(alpha) {
            let v = symbol.eval(x + sx * h_x, xi + sk * h_xi);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Numerical("symbol is not finite on the sample set"));
            }
            acc += v * (wx * wk);
            magnitude += (wx * wk).abs() * v.norm();
        }
    }
    let scale = h_xi.powi(alpha as i32) * h_x.powi(beta as i32);
    Ok((acc / scale, 4.0 * f64::EPSILON * magnitude / scale))
}

fn sup_over_x<S: Symbol + ?Sized>(symbol: &S, xs: &[f64], xi: f64, alpha: u32, beta: u32) -> Result<(f64, bool)> {
    // both signs of xi, sup over the window; a sample is usable when the
    // largest value found clears the noise estimate of its own evaluation
    let mut best = 0.0;
    let mut best_noise = 0.0;
    for &x in xs {
        for s in [xi, -xi] {
            let (d, noise) = if alpha == 0 && beta == 0 {
                let v = symbol.eval(x, s);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::Numerical("symbol is not finite on the sample set"));
                }
                (v, 0.0)
            } else {
                mixed_derivative(symbol, x, s, alpha, beta, default_step(beta, x), default_step(alpha, s))?
            };
            if d.norm() > best {
                best = d.norm();
                best_noise = noise;
            }
        }
    }
    Ok((best, best > 10.0 * best_noise && best > 0.0))
}

/// Slope of `log sup_x |p(x, xi)|` against `log(1 + |xi|)` over
/// `|xi|` in `[xi_max / 10, xi_max]`, sampled geometrically.
pub fn estimate_order<S: Symbol + ?Sized>(symbol: &S, x_window: Interval, xi_max: f64) -> Result<f64> {
    estimate_order_with(
        symbol,
        x_window,
        &CheckOptions {
            xi_max,
            ..CheckOptions::default()
        },
    )
}

pub fn estimate_order_with<S: Symbol + ?Sized>(symbol: &S, x_window: Interval, opts: &CheckOptions) -> Result<f64> {
    if !(opts.xi_max >= 100.0 && opts.xi_max.is_finite()) {
        return Err(Error::InvalidParameter("xi_max must be at least 100"));
    }
    let xs = x_samples(x_window, opts.x_samples);
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for xi in xi_samples(opts.xi_max, opts.samples_per_octave) {
        let (v, _) = sup_over_x(symbol, &xs, xi, 0, 0)?;
        if v == 0.0 {
            return Err(Error::Numerical("symbol vanishes on the sample set"));
        }
        lx.push((1.0 + xi).ln());
        ly.push(v.ln());
    }
    Ok(fit_slope(&lx, &ly).0)
}

/// Fits the decay exponent of every mixed derivative up to the claimed
/// orders and compares it with `m + delta b - rho a` plus the slack.
pub fn check_symbol_estimate<S: Symbol + ?Sized>(
    symbol: &S,
    claim: &SymbolClaim,
    opts: &CheckOptions,
) -> Result<SymbolReport> {
    claim.validate()?;
    let estimated_order = estimate_order_with(symbol, claim.x_window, opts)?;
    let xs = x_samples(claim.x_window, opts.x_samples);
    let xis = xi_samples(opts.xi_max, opts.samples_per_octave);
    let mut entries = Vec::new();
    for alpha in 0..=claim.max_alpha {
        for beta in 0..=claim.max_beta {
            let bound = claim.bound_exponent(alpha, beta);
            let mut lx = Vec::new();
            let mut ly = Vec::new();
            let mut constant: f64 = 0.0;
            for &xi in &xis {
                let (v, usable) = sup_over_x(symbol, &xs, xi, alpha, beta)?;
                if usable {
                    lx.push((1.0 + xi).ln());
                    ly.push(v.ln());
                    constant = constant.max(v / (1.0 + xi).powf(bound));
                }
            }
            let entry = if lx.len() < 4 {
                EstimateEntry {
                    alpha,
                    beta,
                    exponent: None,
                    constant: None,
                    bound,
                    residual: 0.0,
                    status: EntryStatus::NoiseFloor,
                }
            } else {
                let (slope, residual) = fit_slope(&lx, &ly);
                EstimateEntry {
                    alpha,
                    beta,
                    exponent: Some(slope),
                    constant: Some(constant),
                    bound,
                    residual,
                    status: if slope <= bound + opts.slack {
                        EntryStatus::Pass
                    } else {
                        EntryStatus::Fail
                    },
                }
            };
            entries.push(entry);
        }
    }
    let pass = entries.iter().all(|e| e.status != EntryStatus::Fail);
    Ok(SymbolReport {
        estimated_order,
        entries,
        pass,
    })
}

/// The two readings of the exponent in the summands of `a^{(n)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ExponentReading {
    /// `sum_k r^k`, consistent with the generator.
    #[default]
    K,
    /// `sum_k r^(n+1)`, a `k`-independent summand.
    NPlusOne,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum PaperSymbol {
    /// The multiplication symbol of the massive model restricted to the ray
    /// `p = offset + xi * direction`; `x` is ignored.
    YngvasonDr {
        mass: f64,
        offset: [f64; 3],
        direction: [f64; 3],
    },
    /// `a^{(n)}(xi) = sum_{k=1}^n (i xi / (i xi -+ 2 pi / beta))^e`, `x` ignored.
    ByMultiplier {
        n: u32,
        beta: f64,
        axis: HalfLineAxis,
        reading: ExponentReading,
    },
    /// `sum_{k=1}^n (i xi / (i xi -+ 2 pi / beta))^k e^{-+ 2 pi x / beta}`; with
    /// `scale_x` false the exponential is `e^{-+ 2 pi x}`.
    ByHoermander {
        n: u32,
        beta: f64,
        axis: HalfLineAxis,
        scale_x: bool,
    },
}

impl PaperSymbol {
    /// Radial ray through the origin of momentum space.
    pub fn yngvason_radial(mass: f64) -> Self {
        let d = 1.0 / 3f64.sqrt();
        PaperSymbol::YngvasonDr {
            mass,
            offset: [0.0; 3],
            direction: [d; 3],
        }
    }

    pub fn by_multiplier(n: u32, beta: f64) -> Self {
        PaperSymbol::ByMultiplier {
            n,
            beta,
            axis: HalfLineAxis::Plus,
            reading: ExponentReading::K,
        }
    }

    pub fn by_hoermander(n: u32, beta: f64) -> Self {
        PaperSymbol::ByHoermander {
            n,
            beta,
            axis: HalfLineAxis::Plus,
            scale_x: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PaperSymbol::YngvasonDr { mass, direction, .. } => {
                if !(mass > 0.0 && mass.is_finite()) {
                    return Err(Error::InvalidParameter("mass must be positive"));
                }
                if direction.iter().all(|&d| d == 0.0) {
                    return Err(Error::InvalidParameter("ray direction must be nonzero"));
                }
            }
            PaperSymbol::ByMultiplier { n, beta, .. } | PaperSymbol::ByHoermander { n, beta, .. } => {
                if n < 1 {
                    return Err(Error::InvalidParameter("n must be at least 1"));
                }
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(Error::InvalidParameter("beta must be positive and finite"));
                }
            }
        }
        Ok(())
    }
}

fn ratio(xi: f64, beta: f64, axis: HalfLineAxis) -> Complex64 {
    let shift = match axis {
        HalfLineAxis::Plus => -2.0 * PI / beta,
        HalfLineAxis::Minus => 2.0 * PI / beta,
    };
    let ixi = Complex64::new(0.0, xi);
    ixi / (ixi + shift)
}

impl Symbol for PaperSymbol {
    fn eval(&self, x: f64, xi: f64) -> Complex64 {
        match *self {
            PaperSymbol::YngvasonDr {
                mass,
                offset,
                direction,
            } => {
                let p = [0, 1, 2].map(|i| offset[i] + xi * direction[i]);
                dr_symbol(p[0], p[1], p[2], mass).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            }
            PaperSymbol::ByMultiplier { n, beta, axis, reading } => {
                let r = ratio(xi, beta, axis);
                match reading {
                    ExponentReading::K => (1..=n).map(|k| r.powu(k)).sum(),
                    ExponentReading::NPlusOne => r.powu(n + 1) * n as f64,
                }
            }
            PaperSymbol::ByHoermander { n, beta, axis, scale_x } => {
                let r = ratio(xi, beta, axis);
                let rate = if scale_x { 2.0 * PI / beta } else { 2.0 * PI };
                let e = match axis {
                    HalfLineAxis::Plus => (-rate * x).exp(),
                    HalfLineAxis::Minus => (rate * x).exp(),
                };
                (1..=n).map(|k| r.powu(k)).sum::<Complex64>() * e
            }
        }
    }
}

/// Validated multiplier symbol, ready to pass to the checkers.
pub fn paper_symbol(name: PaperSymbol) -> Result<PaperSymbol> {
    name.validate()?;
    Ok(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> Interval {
        Interval::new(0.0, 1.0)
    }

    fn power(k: i32) -> impl Fn(f64, f64) -> Complex64 {
        move |_, xi| Complex64::new(xi.powi(k), 0.0)
    }

    #[test]
    fn pure_powers() {
        for k in 0..=3 {
            let est = estimate_order(&power(k), window(), 1e4).unwrap();
            // log(1 + xi) bends the slope slightly below k
            assert!((est - k as f64).abs() < 0.05, "k = {k}: {est}");
        }
    }

    #[test]
    fn order_preconditions() {
        assert!(estimate_order(&power(1), window(), 50.0).is_err());
        let bad = |_: f64, xi: f64| Complex64::new(1.0 / (xi - xi), 0.0);
        assert!(matches!(estimate_order(&bad, window(), 1e3), Err(Error::Numerical(_))));
    }

    #[test]
    fn claim_validation() {
        assert!(SymbolClaim::new(0.0, 1.0, 0.0, window(), 2, 2).is_err());
        assert!(SymbolClaim::new(0.0, 0.5, 0.7, window(), 2, 2).is_err());
        assert!(SymbolClaim::new(0.0, 1.0, 0.5, window(), 5, 2).is_err());
        assert!(SymbolClaim::new(0.0, 1.0, 1.0, window(), 1, 1).is_err());
        assert!(SymbolClaim::new(0.0, 1.0, 0.5, window(), 4, 4).is_ok());
    }

    #[test]
    fn linear_passes_order_one() {
        let claim = SymbolClaim::standard(1.0, window());
        let r = check_symbol_estimate(&power(1), &claim, &CheckOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
        let e = r.entry(1, 0).unwrap();
        assert!((e.exponent.unwrap()).abs() < 0.05);
        assert_eq!(r.entry(2, 0).unwrap().status, EntryStatus::NoiseFloor);
    }

    #[test]
    fn quadratic_fails_order_one() {
        let claim = SymbolClaim::standard(1.0, window());
        let r = check_symbol_estimate(&power(2), &claim, &CheckOptions::default()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.entry(0, 0).unwrap().status, EntryStatus::Fail);
        let claim2 = SymbolClaim::standard(2.0, window());
        assert!(
            check_symbol_estimate(&power(2), &claim2, &CheckOptions::default())
                .unwrap()
                .pass
        );
    }

    #[test]
    fn paper_symbol_values() {
        let a = paper_symbol(PaperSymbol::by_multiplier(1, 1.0)).unwrap();
        assert_eq!(a.eval(0.3, 0.0).norm(), 0.0);
        assert!((a.eval(0.0, 1e9) - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        let dr = PaperSymbol::YngvasonDr {
            mass: 1.0,
            offset: [0.4, 0.0, -0.3],
            direction: [1.0, 0.0, 0.0],
        };
        assert_eq!(dr.eval(0.0, 2.5).norm(), 0.0);
        assert!(paper_symbol(PaperSymbol::by_multiplier(0, 1.0)).is_err());
        assert!(paper_symbol(PaperSymbol::by_hoermander(1, -1.0)).is_err());
    }

    #[test]
    fn readings_differ_beyond_n_one() {
        let k = PaperSymbol::by_multiplier(3, 2.0);
        let printed = PaperSymbol::ByMultiplier {
            n: 3,
            beta: 2.0,
            axis: HalfLineAxis::Plus,
            reading: ExponentReading::NPlusOne,
        };
        assert!((k.eval(0.0, 1.0) - printed.eval(0.0, 1.0)).norm() > 0.1);
        // both tend to n at large frequency
        assert!((k.eval(0.0, 1e9) - printed.eval(0.0, 1e9)).norm() < 1e-7);
    }

    #[test]
    fn paper_symbols_have_order_zero() {
        let opts = CheckOptions::default();
        let w = window();
        for s in [
            PaperSymbol::yngvason_radial(1.0),
            PaperSymbol::by_multiplier(2, 1.0),
            PaperSymbol::by_hoermander(3, 2.0),
        ] {
            let r = check_symbol_estimate(&s, &SymbolClaim::standard(0.0, w), &opts).unwrap();
            assert!(r.estimated_order.abs() < 0.1, "{s:?}: {}", r.estimated_order);
            assert!(r.pass, "{s:?}: {r:?}");
        }
    }

    #[test]
    fn dr_along_energy_axis_decays() {
        let s = PaperSymbol::YngvasonDr {
            mass: 1.0,
            offset: [0.0, 1.0, 0.5],
            direction: [1.0, 0.0, 0.0],
        };
        let est = estimate_order(&s, window(), 1e4).unwrap();
        assert!((est + 1.0).abs() < 0.05, "{est}");
    }

    #[test]
    fn difference_converges_second_order() {
        let p = |x: f64, xi: f64| Complex64::new(x.exp() * xi.powi(4), 0.0);
        let exact = 0.3f64.exp() * 12.0 * 1.5f64.powi(2);
        let err = |h: f64| (mixed_derivative(&p, 0.3, 1.5, 2, 0, 1e-3, h).unwrap().0.re - exact).abs();
        let ratio = err(0.02) / err(0.01);
        assert!((ratio.log2() - 2.0).abs() < 0.1, "{ratio}");
    }
}
