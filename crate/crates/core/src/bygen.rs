//! Generators of the thermal half-line flows acting on test functions of a
//! fixed scaling dimension `n`.
//!
//! For `n = 0` the flow is the pullback `f -> f o nu^t` and its generator is
//! the first-order operator `v(x) d/dx` with the thermal velocity `v`. For
//! `n >= 1` the flow is the `n`-fold iterated integral from the origin of the
//! pulled-back `n`-th derivative, and the generator picks up non-local
//! corrections given by Fourier multipliers of order zero.
//!
//! Two conventions are configurable through [`DeltaOptions`]:
//!
//! * the sign with which the corrections enter the recursion
//!   `delta^(n) = delta^(n-1) +/- delta_r^(n)`;
//! * whether each correction is anchored at the origin. The plain multiplier
//!   form `e^{sigma x} m_k(D) f` differs from the `k`-fold integral from zero
//!   by a polynomial of degree `k - 1` (its Taylor data at `x = 0`);
//!   anchoring subtracts that polynomial.
//!
//! The defaults are the combination that matches the finite-difference
//! oracle; [`oracle_errors`] reports all four so the choice is reproducible.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::byflow::{check_beta, nu_axis, thermal_velocity};
use crate::diff::richardson;
use crate::lcgeom::{HalfLineAxis, Region};
use crate::specfun::{
    cauchy_iterated_integral, forward_ft, inverse_ft, multiply_spectrum, spectral_derivative, Grid1D, SampledFunction,
    SampledFunction2, Spectrum, SUPPORT_MARGIN_CELLS,
};
use crate::{Coordinate, Error, Interval, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeneratorSpec {
    pub axis: HalfLineAxis,
    pub n: u32,
    pub beta: f64,
}

impl GeneratorSpec {
    pub fn new(axis: HalfLineAxis, n: u32, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { axis, n, beta })
    }

    pub fn with_n(self, n: u32) -> Self {
        Self { n, ..self }
    }

    fn coordinate(&self) -> Coordinate {
        match self.axis {
            HalfLineAxis::Plus => Coordinate::Plus,
            HalfLineAxis::Minus => Coordinate::Minus,
        }
    }

    /// Exponent rate `sigma` in `e^{sigma x}` and overall prefactor of the
    /// corrections.
    fn correction_constants(&self) -> (f64, f64) {
        let c = 2.0 * PI / self.beta;
        match self.axis {
            HalfLineAxis::Plus => (-c, 2.0 * PI),
            HalfLineAxis::Minus => (c, -2.0 * PI),
        }
    }
}

/// Sign of the corrections in the recursion over `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CorrectionSign {
    #[default]
    Plus,
    Minus,
}

impl CorrectionSign {
    pub fn factor(self) -> f64 {
        match self {
            CorrectionSign::Plus => 1.0,
            CorrectionSign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaOptions {
    pub sign: CorrectionSign,
    /// Subtract the Taylor polynomial at the origin from each correction.
    pub anchored: bool,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        Self {
            sign: CorrectionSign::Plus,
            anchored: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LeakageReport {
    pub t: f64,
    pub n: u32,
    /// Squared L2 mass on the transported support.
    pub mass_inside: f64,
    pub mass_outside: f64,
    pub leakage_fraction: f64,
    /// The interval the support is transported to.
    pub transported: Interval,
}

fn check_grid_shape(a: &SampledFunction, b: &[Complex64]) -> Result<()> {
    if a.values().len() == b.len() {
        Ok(())
    } else {
        Err(Error::Shape("length mismatch"))
    }
}

/// `v(x) f'(x)` with the thermal velocity of the axis.
pub fn delta0_axis(f: &SampledFunction, spec: &GeneratorSpec) -> Result<SampledFunction> {
    check_beta(spec.beta)?;
    let d = spectral_derivative(f, 1);
    d.multiply_pointwise(|x| Complex64::new(thermal_velocity(spec.axis, x, spec.beta), 0.0))
}

/// The first-order generator in spacetime coordinates `(x0, x1)` for the
/// forward cone or the right wedge. `f2` is indexed as in
/// [`SampledFunction2`], axis 0 being `x0`.
pub fn delta0_spacetime(f2: &SampledFunction2, region: &Region, beta: f64) -> Result<SampledFunction2> {
    check_beta(beta)?;
    let minus_sign = match region {
        Region::ForwardCone => -1.0,
        Region::RightWedge => 1.0,
        _ => return Err(Error::domain("delta0_spacetime: region", 0.0, 0.0)),
    };
    let c = 2.0 * PI / beta;
    let d0 = f2.partial_derivative(0)?;
    let d1 = f2.partial_derivative(1)?;
    let (g0, g1) = f2.grids();
    let mut out = Vec::with_capacity(f2.values().len());
    for x0 in g0.points() {
        for x1 in g1.points() {
            let ep = (-c * (x0 + x1)).exp();
            let em = (minus_sign * c * (x0 - x1)).exp();
            out.push((ep + em - 2.0, ep - em));
        }
    }
    let values = out
        .iter()
        .zip(d0.values().iter().zip(d1.values()))
        .map(|(&(a0, a1), (&u0, &u1))| (u0 * a0 + u1 * a1) * (beta / 2.0))
        .collect();
    SampledFunction2::from_values(*g0, *g1, values)
}

/// `prefactor * e^{sigma x} * (i xi / (i xi + sigma))^k f`, optionally minus
/// its Taylor polynomial of degree `k - 1` at the origin.
fn correction(spectrum: &Spectrum, spec: &GeneratorSpec, k: u32, anchored: bool) -> Result<Vec<Complex64>> {
    let (sigma, prefactor) = spec.correction_constants();
    let grid = *spectrum.grid();
    let ratio = |xi: f64| {
        let ix = Complex64::new(0.0, xi);
        (ix / (ix + sigma)).powu(k)
    };
    let mut s = spectrum.clone();
    multiply_spectrum(&mut s, &ratio)?;
    let g = inverse_ft(&s);
    let mut values: Vec<Complex64> = grid
        .points()
        .zip(g.values())
        .map(|(x, &v)| v * ((sigma * x).exp() * prefactor))
        .collect();
    if anchored {
        let mut taylor = Vec::with_capacity(k as usize);
        let mut fact = 1.0;
        for j in 0..k {
            if j > 0 {
                fact *= j as f64;
            }
            let sym = |xi: f64| {
                let ix = Complex64::new(0.0, xi);
                ix.powu(k) * (ix + sigma).powi(j as i32 - k as i32)
            };
            taylor.push(spectrum.evaluate_with(sym, 0.0)? * (prefactor / fact));
        }
        for (x, v) in grid.points().zip(values.iter_mut()) {
            let mut p = Complex64::new(0.0, 0.0);
            for coef in taylor.iter().rev() {
                p = p * x + coef;
            }
            *v -= p;
        }
    }
    Ok(values)
}

fn require_order(spec: &GeneratorSpec, what: &'static str) -> Result<()> {
    check_beta(spec.beta)?;
    if spec.n < 1 {
        return Err(Error::domain(what, 0.0, 0.0).on_coordinate(spec.coordinate()));
    }
    Ok(())
}

/// The correction of order `spec.n` in its plain multiplier form.
pub fn delta_r_n(f: &SampledFunction, spec: &GeneratorSpec) -> Result<SampledFunction> {
    require_order(spec, "delta_r_n requires n >= 1")?;
    let values = correction(&forward_ft(f), spec, spec.n, false)?;
    SampledFunction::from_values(*f.grid(), values)
}

/// The correction of order `spec.n` with its Taylor polynomial at the
/// origin removed, so it vanishes to order `n - 1` at `x = 0`.
pub fn delta_r_n_anchored(f: &SampledFunction, spec: &GeneratorSpec) -> Result<SampledFunction> {
    require_order(spec, "delta_r_n requires n >= 1")?;
    let values = correction(&forward_ft(f), spec, spec.n, true)?;
    SampledFunction::from_values(*f.grid(), values)
}

/// Generator for scaling dimension `spec.n` with the default conventions.
pub fn delta_n(f: &SampledFunction, spec: &GeneratorSpec) -> Result<SampledFunction> {
    delta_n_with(f, spec, &DeltaOptions::default())
}

pub fn delta_n_with(f: &SampledFunction, spec: &GeneratorSpec, opts: &DeltaOptions) -> Result<SampledFunction> {
    let base = delta0_axis(f, spec)?;
    if spec.n == 0 {
        return Ok(base);
    }
    let spectrum = forward_ft(f);
    let mut values = base.into_values();
    let sign = opts.sign.factor();
    for k in 1..=spec.n {
        let r = correction(&spectrum, spec, k, opts.anchored)?;
        for (v, rk) in values.iter_mut().zip(r) {
            *v += rk * sign;
        }
    }
    SampledFunction::from_values(*f.grid(), values)
}

fn check_half_line_support(f: &SampledFunction, axis: HalfLineAxis) -> Result<Interval> {
    let s = f.support().ok_or(Error::Support("the flow needs a declared support"))?;
    let ok = match axis {
        HalfLineAxis::Plus => s.lo > 0.0,
        HalfLineAxis::Minus => s.hi < 0.0,
    };
    if ok {
        Ok(s)
    } else {
        Err(Error::Support("support must lie in the open half-line of the axis"))
    }
}

/// Where the support `[a, b]` of `f` sits after the flow: the preimage
/// `nu^{-t}([a, b])` (the flow maps are increasing).
pub fn transported_support(support: Interval, t: f64, spec: &GeneratorSpec) -> Result<Interval> {
    let tag = spec.coordinate();
    let lo = nu_axis(spec.axis, -t, support.lo, spec.beta).map_err(|e| e.on_coordinate(tag))?;
    let hi = nu_axis(spec.axis, -t, support.hi, spec.beta).map_err(|e| e.on_coordinate(tag))?;
    Ok(Interval::new(lo, hi))
}

fn check_inside_grid(iv: Interval, grid: &Grid1D, t: f64, tag: Coordinate) -> Result<()> {
    let margin = SUPPORT_MARGIN_CELLS * grid.spacing();
    if iv.lo <= grid.lo() + margin {
        return Err(Error::domain("eta_n: transported support leaves the grid", t, iv.lo).on_coordinate(tag));
    }
    if iv.hi >= grid.hi() - margin {
        return Err(Error::domain("eta_n: transported support leaves the grid", t, iv.hi).on_coordinate(tag));
    }
    Ok(())
}

/// The flow at time `t` for scaling dimension `spec.n`.
///
/// The pullback uses six-point Lagrange interpolation. Grid points where
/// the flow map is inadmissible are points whose image would lie at
/// infinity on the far side of the origin, so the pulled-back function
/// vanishes there. At `t = 0` the flow is the identity and `f` is returned
/// unchanged.
pub fn eta_n(t: f64, f: &SampledFunction, spec: &GeneratorSpec) -> Result<SampledFunction> {
    check_beta(spec.beta)?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter("flow time must be finite"));
    }
    let support = check_half_line_support(f, spec.axis)?;
    let tag = spec.coordinate();
    let transported = transported_support(support, t, spec)?;
    check_inside_grid(transported, f.grid(), t, tag)?;

    if t == 0.0 {
        return Ok(f.clone());
    }
    let g = spectral_derivative(f, spec.n);
    let pulled = {
        let mut out = Vec::with_capacity(g.values().len());
        for x in f.grid().points() {
            out.push(match nu_axis(spec.axis, t, x, spec.beta) {
                Ok(y) => g.interpolate6(y),
                Err(e) if e.is_domain() => Complex64::new(0.0, 0.0),
                Err(e) => return Err(e.on_coordinate(tag)),
            });
        }
        out
    };
    check_grid_shape(f, &pulled)?;
    let pulled = SampledFunction::from_values(*f.grid(), pulled)?;
    if spec.n == 0 {
        pulled.with_support(transported)
    } else {
        cauchy_iterated_integral(&pulled, spec.n)
    }
}

/// Richardson-extrapolated central difference of `t -> eta_n(t, f)` at 0.
pub fn generator_oracle(f: &SampledFunction, spec: &GeneratorSpec, h: f64) -> Result<SampledFunction> {
    let values = richardson(h, |t| eta_n(t, f, spec).map(SampledFunction::into_values))?;
    SampledFunction::from_values(*f.grid(), values)
}

/// Oracle-vs-formula discrepancies `||delta_n - oracle|| / ||f||` under each
/// convention combination.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleErrors {
    pub n: u32,
    pub beta: f64,
    pub plus_anchored: f64,
    pub minus_anchored: f64,
    pub plus_plain: f64,
    pub minus_plain: f64,
}

impl OracleErrors {
    pub fn get(&self, sign: CorrectionSign, anchored: bool) -> f64 {
        match (sign, anchored) {
            (CorrectionSign::Plus, true) => self.plus_anchored,
            (CorrectionSign::Minus, true) => self.minus_anchored,
            (CorrectionSign::Plus, false) => self.plus_plain,
            (CorrectionSign::Minus, false) => self.minus_plain,
        }
    }
}

fn relative_error(a: &SampledFunction, b: &SampledFunction, scale: f64) -> Result<f64> {
    let d = a.l2_distance(b)?;
    Ok(if scale > 0.0 { d / scale } else { d })
}

pub fn oracle_errors(f: &SampledFunction, spec: &GeneratorSpec, h: f64) -> Result<OracleErrors> {
    let oracle = generator_oracle(f, spec, h)?;
    let scale = f.l2_norm();
    let mut errs = [0.0; 4];
    let combos = [
        (CorrectionSign::Plus, true),
        (CorrectionSign::Minus, true),
        (CorrectionSign::Plus, false),
        (CorrectionSign::Minus, false),
    ];
    for (slot, (sign, anchored)) in errs.iter_mut().zip(combos) {
        let d = delta_n_with(f, spec, &DeltaOptions { sign, anchored })?;
        *slot = relative_error(&d, &oracle, scale)?;
    }
    Ok(OracleErrors {
        n: spec.n,
        beta: spec.beta,
        plus_anchored: errs[0],
        minus_anchored: errs[1],
        plus_plain: errs[2],
        minus_plain: errs[3],
    })
}

/// Outcome of the sign disambiguation over a set of oracle runs.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignResolution {
    /// The unique sign meeting the tolerance in every run, if there is one.
    pub winner: Option<CorrectionSign>,
    pub anchored: bool,
    pub max_error_plus: f64,
    pub max_error_minus: f64,
    pub tolerance: f64,
}

pub fn resolve_correction_sign(runs: &[OracleErrors], anchored: bool, tolerance: f64) -> SignResolution {
    let max = |sign| runs.iter().map(|r| r.get(sign, anchored)).fold(0.0, f64::max);
    let max_error_plus = max(CorrectionSign::Plus);
    let max_error_minus = max(CorrectionSign::Minus);
    let winner = match (max_error_plus <= tolerance, max_error_minus <= tolerance) {
        (true, false) => Some(CorrectionSign::Plus),
        (false, true) => Some(CorrectionSign::Minus),
        _ => None,
    };
    SignResolution {
        winner,
        anchored,
        max_error_plus,
        max_error_minus,
        tolerance,
    }
}

/// Squared L2 mass of `eta_n(t, f)` on and off the transported support.
pub fn support_leakage(f: &SampledFunction, t: f64, spec: &GeneratorSpec) -> Result<LeakageReport> {
    let support = check_half_line_support(f, spec.axis)?;
    let transported = transported_support(support, t, spec)?;
    let e = eta_n(t, f, spec)?;
    let h = f.grid().spacing();
    let (mut inside, mut outside) = (0.0, 0.0);
    for (x, v) in f.grid().points().zip(e.values()) {
        if transported.contains_closed(x) {
            inside += v.norm_sqr();
        } else {
            outside += v.norm_sqr();
        }
    }
    let (inside, outside) = (inside * h, outside * h);
    let total = inside + outside;
    Ok(LeakageReport {
        t,
        n: spec.n,
        mass_inside: inside,
        mass_outside: outside,
        leakage_fraction: if total > 0.0 { outside / total } else { 0.0 },
        transported,
    })
}

/// Test-function shapes used by the oracle runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BumpShape {
    /// `exp(-u^2 / 2)`
    Gaussian,
    /// `u exp(-u^2 / 2)`
    OddGaussian,
    /// `cos(3 u) exp(-u^2 / 2)`
    Modulated,
    /// `exp(-1 / (1 - u^2))` on `|u| < 1`, exactly compactly supported.
    Smooth,
    /// Identically zero, declared on the same support as `Smooth`.
    Zero,
}

/// `shape((x - center) / width)` with a declared support.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bump {
    pub shape: BumpShape,
    pub center: f64,
    pub width: f64,
}

/// Gaussian tails are declared cut at this many widths (`e^{-32}`).
const GAUSSIAN_SUPPORT_WIDTHS: f64 = 8.0;

impl Bump {
    pub const fn new(shape: BumpShape, center: f64, width: f64) -> Self {
        Self { shape, center, width }
    }

    /// The C-infinity bump on `[0.5, 1.5]` used for leakage measurements.
    pub const fn standard() -> Self {
        Self::new(BumpShape::Smooth, 1.0, 0.5)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.width;
        let g = (-0.5 * u * u).exp();
        match self.shape {
            BumpShape::Gaussian => g,
            BumpShape::OddGaussian => u * g,
            BumpShape::Modulated => (3.0 * u).cos() * g,
            BumpShape::Smooth => {
                if u.abs() < 1.0 {
                    (-1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }
            BumpShape::Zero => 0.0,
        }
    }

    pub fn support(&self) -> Interval {
        let r = match self.shape {
            BumpShape::Smooth | BumpShape::Zero => self.width,
            _ => GAUSSIAN_SUPPORT_WIDTHS * self.width,
        };
        Interval::new(self.center - r, self.center + r)
    }

    pub fn sample(&self, grid: Grid1D) -> Result<SampledFunction> {
        SampledFunction::from_real_fn(grid, Some(self.support()), |x| self.eval(x))
    }
}
