//! Sampled functions on uniform periodic grids and the operators built on
//! the discrete Fourier transform.
//!
//! Fourier convention:
//!
//! ```text
//! f~(xi) = (1 / 2 pi) * integral f(x) e^{-i xi x} dx,
//! f(x)   = integral f~(xi) e^{i x xi} d xi,
//! ```
//!
//! so that a multiplier `m(xi)` acts as `x -> integral m(xi) f~(xi) e^{i x xi} d xi`
//! without extra constants. With this normalization Parseval reads
//! `||f||_2 = sqrt(2 pi) ||f~||_2`; [`Spectrum::l2_norm`] folds the factor in.
//!
//! A grid `[lo, hi)` with `n` points has spacing `h = (hi - lo) / n` and is
//! treated as periodic. Functions that declare a support keep it at least
//! [`SUPPORT_MARGIN_CELLS`] cells away from both ends so that wrap-around is
//! negligible.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::fft::Fft;
use crate::{Error, Interval, Result};

/// Minimum distance, in grid cells, between a declared support and the ends
/// of the grid.
pub const SUPPORT_MARGIN_CELLS: f64 = 10.0;

const MIN_GRID_POINTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Shape("grid needs finite lo < hi"));
        }
        if n < MIN_GRID_POINTS || !n.is_power_of_two() {
            return Err(Error::Shape("grid size must be a power of two >= 16"));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.lo + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.point(j))
    }

    /// Angular frequency of DFT bin `k` in FFT order. The Nyquist bin maps to
    /// `-pi / h`.
    pub fn frequency(&self, k: usize) -> f64 {
        let n = self.n as isize;
        let k = k as isize;
        let signed = if k < n / 2 { k } else { k - n };
        2.0 * PI * signed as f64 / self.period()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.frequency(k)).collect()
    }

    pub fn frequency_spacing(&self) -> f64 {
        2.0 * PI / self.period()
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    /// Index of the grid node at `x`, if `x` is a node up to rounding.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let u = (x - self.lo) / self.spacing();
        let j = u.round();
        if (u - j).abs() < 1e-9 && j >= 0.0 && (j as usize) < self.n {
            Some(j as usize)
        } else {
            None
        }
    }

    /// Whether `x` lies within the sampled points `[lo, lo + (n - 1) h]`.
    pub fn covers(&self, x: f64) -> bool {
        x >= self.lo && x <= self.point(self.n - 1)
    }

    fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n && self.lo == other.lo && self.hi == other.hi
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
    support: Option<Interval>,
}

impl SampledFunction {
    /// A function with a declared support, checked against the margin rule.
    pub fn new(grid: Grid1D, values: Vec<Complex64>, support: Interval) -> Result<Self> {
        let mut f = Self::from_values(grid, values)?;
        f.set_support(support)?;
        Ok(f)
    }

    /// A function without a support claim (outputs of non-local operators).
    pub fn from_values(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape("value count does not match grid size"));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Numerical("sampled values must be finite"));
        }
        Ok(Self {
            grid,
            values,
            support: None,
        })
    }

    pub fn from_fn<F>(grid: Grid1D, support: Option<Interval>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        let values = grid.points().map(f).collect();
        let mut out = Self::from_values(grid, values)?;
        if let Some(s) = support {
            out.set_support(s)?;
        }
        Ok(out)
    }

    pub fn from_real_fn<F>(grid: Grid1D, support: Option<Interval>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        Self::from_fn(grid, support, |x| Complex64::new(f(x), 0.0))
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            support: None,
        }
    }

    fn set_support(&mut self, support: Interval) -> Result<()> {
        let margin = SUPPORT_MARGIN_CELLS * self.grid.spacing();
        if support.is_empty() {
            return Err(Error::Support("support interval is empty"));
        }
        if !(support.lo > self.grid.lo + margin && support.hi < self.grid.hi - margin) {
            return Err(Error::Support(
                "declared support must stay ten cells away from the grid ends",
            ));
        }
        self.support = Some(support);
        Ok(())
    }

    pub fn with_support(mut self, support: Interval) -> Result<Self> {
        self.set_support(support)?;
        Ok(self)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn support(&self) -> Option<Interval> {
        self.support
    }

    /// `sqrt(h * sum |f_j|^2)`
    pub fn l2_norm(&self) -> f64 {
        let h = self.grid.spacing();
        (h * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// L2 distance to `other` on the shared grid.
    pub fn l2_distance(&self, other: &SampledFunction) -> Result<f64> {
        self.check_grid(other)?;
        let h = self.grid.spacing();
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((h * s).sqrt())
    }

    pub(crate) fn check_grid(&self, other: &SampledFunction) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::Shape("functions live on different grids"))
        }
    }

    /// `a * self + b * other`; the result carries no support claim.
    pub fn combine(&self, a: Complex64, other: &SampledFunction, b: Complex64) -> Result<Self> {
        self.check_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
            support: None,
        })
    }

    /// Pointwise `c(x) * f(x)`.
    pub fn multiply_pointwise<C>(&self, c: C) -> Result<Self>
    where
        C: Fn(f64) -> Complex64,
    {
        let values = self.grid.points().zip(&self.values).map(|(x, &v)| c(x) * v).collect();
        let mut out = Self::from_values(self.grid, values)?;
        out.support = self.support;
        Ok(out)
    }

    /// Four-point Lagrange (cubic) interpolation. Samples beyond the grid
    /// count as zero; the grid is not wrapped.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        interpolate_stencil::<4>(&self.grid, &self.values, x)
    }

    /// Six-point Lagrange (quintic) interpolation, same conventions as
    /// [`interpolate`](Self::interpolate).
    pub fn interpolate6(&self, x: f64) -> Complex64 {
        interpolate_stencil::<6>(&self.grid, &self.values, x)
    }
}

/// Lagrange weights on the `K` nodes `1 - K/2, ..., K/2` (relative to the
/// cell start) evaluated at offset `s` in `[0, 1)`.
pub(crate) fn lagrange_weights<const K: usize>(s: f64) -> [f64; K] {
    let first = 1 - (K as isize) / 2;
    let mut w = [1.0; K];
    for (j, wj) in w.iter_mut().enumerate() {
        let xj = (first + j as isize) as f64;
        for k in 0..K {
            if k != j {
                let xk = (first + k as isize) as f64;
                *wj *= (s - xk) / (xj - xk);
            }
        }
    }
    w
}

/// First stencil index and weights for `K`-point interpolation at `x`, or
/// `None` when the whole stencil lies off the grid.
pub(crate) fn stencil<const K: usize>(grid: &Grid1D, x: f64) -> Option<(isize, [f64; K])> {
    let u = (x - grid.lo()) / grid.spacing();
    let reach = (K / 2) as f64;
    if !u.is_finite() || u < -reach || u > grid.len() as f64 + reach - 1.0 {
        return None;
    }
    let i = u.floor();
    Some((i as isize + 1 - (K as isize) / 2, lagrange_weights::<K>(u - i)))
}

fn interpolate_stencil<const K: usize>(grid: &Grid1D, values: &[Complex64], x: f64) -> Complex64 {
    let Some((start, w)) = stencil::<K>(grid, x) else {
        return Complex64::new(0.0, 0.0);
    };
    let n = values.len() as isize;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, wk) in w.iter().enumerate() {
        let idx = start + k as isize;
        if (0..n).contains(&idx) && *wk != 0.0 {
            acc += values[idx as usize] * *wk;
        }
    }
    acc
}

/// Values `f~(xi_k)` of the Fourier transform at the dual frequencies, in
/// FFT order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    grid: Grid1D,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: Grid1D, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Shape("coefficient count does not match grid size"));
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.grid.frequencies()
    }

    /// `sqrt(2 pi * dxi * sum |f~_k|^2)`, equal to the spatial L2 norm.
    pub fn l2_norm(&self) -> f64 {
        let dxi = self.grid.frequency_spacing();
        (2.0 * PI * dxi * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `integral m(xi) f~(xi) e^{i x xi} d xi` evaluated directly at one
    /// point `x`, using the trigonometric interpolant (the Nyquist bin is
    /// taken as its real cosine mode).
    pub fn evaluate_with<M>(&self, symbol: M, x: f64) -> Result<Complex64>
    where
        M: Fn(f64) -> Complex64,
    {
        let dxi = self.grid.frequency_spacing();
        let nyq = self.grid.len() / 2;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in self.coeffs.iter().enumerate() {
            let xi = self.grid.frequency(k);
            let term = if k == nyq {
                let m = nyquist_symbol(&symbol, self.grid.nyquist());
                let phase = cis(xi * self.grid.lo());
                c * phase * m * (self.grid.nyquist() * (x - self.grid.lo())).cos()
            } else {
                c * symbol(xi) * cis(xi * x)
            };
            acc += term;
        }
        let out = acc * dxi;
        if out.re.is_finite() && out.im.is_finite() {
            Ok(out)
        } else {
            Err(Error::Numerical("symbol is not finite on the sampled frequencies"))
        }
    }
}

fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

/// The Nyquist bin stands for both `+pi/h` and `-pi/h`; use the average so
/// real functions stay real and `(i xi)^k` with odd `k` annihilates it.
fn nyquist_symbol<M: Fn(f64) -> Complex64>(symbol: &M, xi_nyq: f64) -> Complex64 {
    (symbol(xi_nyq) + symbol(-xi_nyq)) * 0.5
}

pub fn forward_ft(f: &SampledFunction) -> Spectrum {
    let grid = *f.grid();
    let mut buf = f.values().to_vec();
    Fft::new(grid.len()).forward(&mut buf);
    let scale = grid.spacing() / (2.0 * PI);
    for (k, c) in buf.iter_mut().enumerate() {
        *c *= cis(-grid.frequency(k) * grid.lo()) * scale;
    }
    Spectrum { grid, coeffs: buf }
}

pub fn inverse_ft(g: &Spectrum) -> SampledFunction {
    let grid = *g.grid();
    let mut buf: Vec<Complex64> = g
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| c * cis(grid.frequency(k) * grid.lo()))
        .collect();
    Fft::new(grid.len()).inverse(&mut buf);
    let dxi = grid.frequency_spacing();
    for v in buf.iter_mut() {
        *v *= dxi;
    }
    SampledFunction {
        grid,
        values: buf,
        support: None,
    }
}

/// A Fourier multiplier `xi -> symbol(xi)` together with the order its
/// author claims for it.
#[derive(Clone, Copy, Debug)]
pub struct FourierMultiplier<S> {
    pub symbol: S,
    pub order_claim: f64,
}

impl<S> FourierMultiplier<S>
where
    S: Fn(f64) -> Complex64,
{
    pub fn new(symbol: S, order_claim: f64) -> Self {
        Self { symbol, order_claim }
    }
}

pub fn apply_multiplier<S>(f: &SampledFunction, m: &FourierMultiplier<S>) -> Result<SampledFunction>
where
    S: Fn(f64) -> Complex64,
{
    let mut spec = forward_ft(f);
    multiply_spectrum(&mut spec, &m.symbol)?;
    Ok(inverse_ft(&spec))
}

pub(crate) fn multiply_spectrum<S>(spec: &mut Spectrum, symbol: &S) -> Result<()>
where
    S: Fn(f64) -> Complex64,
{
    let grid = spec.grid;
    let nyq = grid.len() / 2;
    for (k, c) in spec.coeffs.iter_mut().enumerate() {
        let m = if k == nyq {
            nyquist_symbol(symbol, grid.nyquist())
        } else {
            symbol(grid.frequency(k))
        };
        if !(m.re.is_finite() && m.im.is_finite()) {
            return Err(Error::Numerical("symbol is not finite on the sampled frequencies"));
        }
        *c *= m;
    }
    Ok(())
}

/// `k`-th derivative by multiplication with `(i xi)^k`. The declared support
/// carries over.
pub fn spectral_derivative(f: &SampledFunction, k: u32) -> SampledFunction {
    if k == 0 {
        return f.clone();
    }
    let mut spec = forward_ft(f);
    let ik = |xi: f64| Complex64::new(0.0, xi).powu(k);
    // (i xi)^k is finite everywhere
    multiply_spectrum(&mut spec, &ik).expect("polynomial symbol is finite");
    let mut out = inverse_ft(&spec);
    out.support = f.support;
    out
}

// Integrals over one cell of the six-point Lagrange interpolant, in units
// of h / 1440. Row r is the cell starting at stencil node r; interior cells
// use the centered row 2, the first and last two cells the one-sided rows.
const CELL_WEIGHTS: [[f64; 6]; 5] = [
    [475.0, 1427.0, -798.0, 482.0, -173.0, 27.0],
    [-27.0, 637.0, 1022.0, -258.0, 77.0, -11.0],
    [11.0, -93.0, 802.0, 802.0, -93.0, 11.0],
    [-11.0, 77.0, -258.0, 1022.0, 637.0, -27.0],
    [27.0, -173.0, 482.0, -798.0, 1427.0, 475.0],
];

/// Cumulative integral from the first node, sixth order. The centered rule
/// annihilates the alternating (Nyquist) mode, so high-frequency roundoff
/// does not integrate into a drift the way it does under composite Simpson.
fn cumulative_integral(g: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = g.len();
    debug_assert!(n >= 6);
    let cell = |i: usize| {
        let (row, start) = if i < 2 {
            (i, 0)
        } else if i + 4 > n {
            (i + 6 - n, n - 6)
        } else {
            (2, i - 2)
        };
        CELL_WEIGHTS[row]
            .iter()
            .zip(&g[start..start + 6])
            .map(|(w, v)| v * *w)
            .sum::<Complex64>()
    };
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let scale = h / 1440.0;
    for i in 0..n - 1 {
        c[i + 1] = c[i] + cell(i) * scale;
    }
    c
}

/// `x -> integral_0^x (x - s)^{n-1} / (n-1)! g(s) ds`, the `n`-fold iterated
/// integral from the origin.
///
/// The kernel is realized as `n` nested cumulative integrals, each
/// re-anchored to vanish at `x = 0`; this is algebraically the Cauchy formula
/// and avoids the cancellation of its expanded binomial form far from the
/// origin.
pub fn cauchy_iterated_integral(g: &SampledFunction, n: u32) -> Result<SampledFunction> {
    if n == 0 {
        return Err(Error::InvalidParameter("iterated integral needs n >= 1"));
    }
    let grid = *g.grid();
    if !grid.covers(0.0) {
        return Err(Error::domain("cauchy_iterated_integral", 0.0, 0.0));
    }
    let h = grid.spacing();
    let anchor = grid.node_index(0.0);
    let mut cur = g.values().to_vec();
    for _ in 0..n {
        let c = cumulative_integral(&cur, h);
        let offset = match anchor {
            Some(i0) => c[i0],
            None => interpolate_stencil::<6>(&grid, &c, 0.0),
        };
        cur = c.into_iter().map(|v| v - offset).collect();
    }
    SampledFunction::from_values(grid, cur)
}

/// A function of `(x0, x1)` sampled on the tensor product of two grids,
/// stored row-major with `x1` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction2 {
    grid0: Grid1D,
    grid1: Grid1D,
    values: Vec<Complex64>,
}

impl SampledFunction2 {
    pub fn from_values(grid0: Grid1D, grid1: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid0.len() * grid1.len() {
            return Err(Error::Shape("value count does not match grid sizes"));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Numerical("sampled values must be finite"));
        }
        Ok(Self { grid0, grid1, values })
    }

    pub fn from_fn<F>(grid0: Grid1D, grid1: Grid1D, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        let mut values = Vec::with_capacity(grid0.len() * grid1.len());
        for x0 in grid0.points() {
            for x1 in grid1.points() {
                values.push(f(x0, x1));
            }
        }
        Self::from_values(grid0, grid1, values)
    }

    pub fn grids(&self) -> (&Grid1D, &Grid1D) {
        (&self.grid0, &self.grid1)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i0: usize, i1: usize) -> Complex64 {
        self.values[i0 * self.grid1.len() + i1]
    }

    pub fn l2_norm(&self) -> f64 {
        let w = self.grid0.spacing() * self.grid1.spacing();
        (w * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn l2_distance(&self, other: &SampledFunction2) -> Result<f64> {
        if !(self.grid0.same_as(&other.grid0) && self.grid1.same_as(&other.grid1)) {
            return Err(Error::Shape("functions live on different grids"));
        }
        let w = self.grid0.spacing() * self.grid1.spacing();
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((w * s).sqrt())
    }

    /// Spectral first derivative along axis 0 (`x0`) or 1 (`x1`).
    pub fn partial_derivative(&self, axis: usize) -> Result<Self> {
        let (n0, n1) = (self.grid0.len(), self.grid1.len());
        let mut out = self.values.clone();
        let ik = |xi: f64| Complex64::new(0.0, xi);
        match axis {
            0 => {
                let mut line = vec![Complex64::new(0.0, 0.0); n0];
                for i1 in 0..n1 {
                    for (i0, v) in line.iter_mut().enumerate() {
                        *v = self.values[i0 * n1 + i1];
                    }
                    let d = differentiate_line(self.grid0, &line, &ik)?;
                    for i0 in 0..n0 {
                        out[i0 * n1 + i1] = d[i0];
                    }
                }
            }
            1 => {
                for i0 in 0..n0 {
                    let row = &self.values[i0 * n1..(i0 + 1) * n1];
                    let d = differentiate_line(self.grid1, row, &ik)?;
                    out[i0 * n1..(i0 + 1) * n1].copy_from_slice(&d);
                }
            }
            _ => return Err(Error::InvalidParameter("axis must be 0 or 1")),
        }
        Ok(Self {
            grid0: self.grid0,
            grid1: self.grid1,
            values: out,
        })
    }
}

/// Apply a multiplier to one line of samples on `grid`.
pub(crate) fn differentiate_line<S>(grid: Grid1D, line: &[Complex64], symbol: &S) -> Result<Vec<Complex64>>
where
    S: Fn(f64) -> Complex64,
{
    let f = SampledFunction::from_values(grid, line.to_vec())?;
    let mut spec = forward_ft(&f);
    multiply_spectrum(&mut spec, symbol)?;
    Ok(inverse_ft(&spec).into_values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn gaussian(grid: Grid1D, center: f64, width: f64) -> SampledFunction {
        let support = Interval::new(center - 12.0 * width, center + 12.0 * width);
        SampledFunction::from_real_fn(grid, Some(support), |x| {
            (-(x - center).powi(2) / (2.0 * width * width)).exp()
        })
        .unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(0.0, 1.0, 16).is_ok());
        assert!(Grid1D::new(0.0, 1.0, 8).is_err());
        assert!(Grid1D::new(0.0, 1.0, 24).is_err());
        assert!(Grid1D::new(1.0, 1.0, 16).is_err());
        assert!(Grid1D::new(0.0, f64::INFINITY, 16).is_err());
        let g = Grid1D::new(-1.0, 3.0, 64).unwrap();
        assert_eq!(g.spacing(), 4.0 / 64.0);
        assert_eq!(g.node_index(0.0), Some(16));
        assert_eq!(g.node_index(0.01), None);
        assert_eq!(g.frequency(32), -PI / g.spacing());
        assert!(g.frequency(31) > 0.0 && g.frequency(33) < 0.0);
    }

    #[test]
    fn support_margin_is_enforced() {
        let g = Grid1D::new(0.0, 1.0, 64).unwrap();
        let v = vec![c(0.0); 64];
        // margin is 10 cells = 0.15625
        assert!(SampledFunction::new(g, v.clone(), Interval::new(0.2, 0.8)).is_ok());
        assert!(SampledFunction::new(g, v.clone(), Interval::new(0.1, 0.8)).is_err());
        assert!(SampledFunction::new(g, v.clone(), Interval::new(0.2, 0.9)).is_err());
        assert!(SampledFunction::from_values(g, vec![c(0.0); 63]).is_err());
        let mut bad = v;
        bad[3] = c(f64::NAN);
        assert!(SampledFunction::from_values(g, bad).is_err());
    }

    #[test]
    fn transform_of_zero_is_zero() {
        let g = Grid1D::new(-2.0, 2.0, 64).unwrap();
        let z = SampledFunction::zeros(g);
        let s = forward_ft(&z);
        assert!(s.coeffs().iter().all(|c| c.norm() == 0.0));
        assert!(inverse_ft(&s).values().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let g = Grid1D::new(-6.0, 10.0, 512).unwrap();
        let (x0, sigma) = (1.3, 0.4);
        let f = gaussian(g, x0, sigma);
        let s = forward_ft(&f);
        for (k, &coef) in s.coeffs().iter().enumerate() {
            let xi = g.frequency(k);
            let exact = Complex64::from_polar(
                sigma * (2.0 * PI).sqrt() / (2.0 * PI) * (-0.5 * sigma * sigma * xi * xi).exp(),
                -xi * x0,
            );
            assert!((coef - exact).norm() < 1e-13, "k = {k}");
        }
        let back = inverse_ft(&s);
        assert!(back.l2_distance(&f).unwrap() / f.l2_norm() < 1e-12);
    }

    #[test]
    fn spike_spreads_evenly() {
        let g = Grid1D::new(-1.0, 1.0, 128).unwrap();
        let mut v = vec![c(0.0); 128];
        v[40] = c(1.0);
        let s = forward_ft(&SampledFunction::from_values(g, v).unwrap());
        let expected = g.spacing() / (2.0 * PI);
        for coef in s.coeffs() {
            assert!((coef.norm() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn parseval() {
        let g = Grid1D::new(-3.0, 5.0, 256).unwrap();
        let f = SampledFunction::from_fn(g, None, |x| {
            Complex64::new((3.0 * x).sin(), x.cos()) * (-(x - 1.0).powi(2)).exp()
        })
        .unwrap();
        let s = forward_ft(&f);
        assert!((s.l2_norm() - f.l2_norm()).abs() / f.l2_norm() < 1e-12);
    }

    #[test]
    fn derivative_examples() {
        let g = Grid1D::new(-4.0, 4.0, 256).unwrap();
        let f = SampledFunction::from_real_fn(g, Some(Interval::new(-3.0, 3.0)), |x| {
            (4.0 * x).sin() * (-2.0 * x * x).exp()
        })
        .unwrap();
        assert_eq!(spectral_derivative(&f, 0), f);
        let d = spectral_derivative(&f, 1);
        assert_eq!(d.support(), f.support());
        // central-difference oracle on the closed form
        let fx = |x: f64| (4.0 * x).sin() * (-2.0 * x * x).exp();
        let eps = 1e-5;
        for (j, x) in g.points().enumerate() {
            let fd = (fx(x + eps) - fx(x - eps)) / (2.0 * eps);
            assert!((d.values()[j].re - fd).abs() < 1e-6, "x = {x}");
        }
        let z = spectral_derivative(&SampledFunction::zeros(g), 3);
        assert!(z.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn multiplier_examples() {
        let g = Grid1D::new(-4.0, 6.0, 512).unwrap();
        let f = gaussian(g, 1.0, 0.3);
        let one = FourierMultiplier::new(|_| c(1.0), 0.0);
        let same = apply_multiplier(&f, &one).unwrap();
        assert!(same.l2_distance(&f).unwrap() < 1e-13);
        let ixi = FourierMultiplier::new(|xi| Complex64::new(0.0, xi), 1.0);
        let d = apply_multiplier(&f, &ixi).unwrap();
        assert!(d.l2_distance(&spectral_derivative(&f, 1)).unwrap() < 1e-13);
        let bad = FourierMultiplier::new(|xi: f64| c(1.0 / xi), -1.0);
        assert!(matches!(apply_multiplier(&f, &bad), Err(Error::Numerical(_))));
    }

    #[test]
    fn multiplier_matches_direct_quadrature() {
        // m(xi) = i xi / (i xi - 2 pi / beta), beta = 1, against trapezoid
        // quadrature of the Fourier integral with the closed-form transform.
        let beta = 1.0;
        let cst = 2.0 * PI / beta;
        let m = |xi: f64| Complex64::new(0.0, xi) / Complex64::new(-cst, xi);
        let (x0, sigma) = (2.0, 0.35);
        let g = Grid1D::new(-3.0, 13.0, 2048).unwrap();
        let f = gaussian(g, x0, sigma);
        let out = apply_multiplier(&f, &FourierMultiplier::new(m, 0.0)).unwrap();
        let ft = |xi: f64| {
            Complex64::from_polar(
                sigma / (2.0 * PI).sqrt() * (-0.5 * sigma * sigma * xi * xi).exp(),
                -xi * x0,
            )
        };
        let (lim, steps) = (60.0, 24_000);
        let dxi = 2.0 * lim / steps as f64;
        for x in [0.5, 1.75, 2.0, 2.625, 4.0] {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=steps {
                let xi = -lim + j as f64 * dxi;
                let w = if j == 0 || j == steps { 0.5 } else { 1.0 };
                acc += ft(xi) * m(xi) * Complex64::from_polar(1.0, x * xi) * w;
            }
            acc *= dxi;
            let j = g.node_index(x).unwrap();
            assert!((out.values()[j] - acc).norm() < 1e-8, "x = {x}");
        }
    }

    /// Fine composite Simpson quadrature of the Cauchy kernel applied to
    /// the closed-form integrand.
    fn cauchy_direct<G: Fn(f64) -> f64>(g: G, n: u32, x: f64) -> f64 {
        let fact: f64 = (1..n).map(|k| k as f64).product();
        let steps = 4000;
        let h = x / steps as f64;
        let kern = |s: f64| g(s) * (x - s).powi(n as i32 - 1) / fact;
        let mut acc = kern(0.0) + kern(x);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * kern(i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn cauchy_examples() {
        let g = Grid1D::new(-1.0, 3.0, 256).unwrap();
        let one = SampledFunction::from_real_fn(g, None, |_| 1.0).unwrap();
        let i1 = cauchy_iterated_integral(&one, 1).unwrap();
        let i2 = cauchy_iterated_integral(&one, 2).unwrap();
        let lin = SampledFunction::from_real_fn(g, None, |s| s).unwrap();
        let i3 = cauchy_iterated_integral(&lin, 3).unwrap();
        for (j, x) in g.points().enumerate() {
            assert!((i1.values()[j].re - x).abs() < 1e-13);
            assert!((i2.values()[j].re - x * x / 2.0).abs() < 1e-12);
            assert!((i3.values()[j].re - x.powi(4) / 24.0).abs() < 1e-8);
        }
        assert!(matches!(
            cauchy_iterated_integral(&one, 0),
            Err(Error::InvalidParameter(_))
        ));
        let off = Grid1D::new(0.5, 3.0, 64).unwrap();
        let g2 = SampledFunction::from_real_fn(off, None, |_| 1.0).unwrap();
        assert!(cauchy_iterated_integral(&g2, 1).unwrap_err().is_domain());
    }

    #[test]
    fn cauchy_matches_single_kernel_quadrature() {
        let g = Grid1D::new(-1.0, 3.0, 256).unwrap();
        let gx = |s: f64| (2.0 * s).cos() * (-s * s).exp();
        let f = SampledFunction::from_real_fn(g, None, gx).unwrap();
        for n in 1..=4 {
            let nested = cauchy_iterated_integral(&f, n).unwrap();
            for j in (0..256).step_by(7) {
                let direct = cauchy_direct(gx, n, g.point(j));
                let got = nested.values()[j];
                assert!(
                    (got.re - direct).abs() < 1e-7 && got.im == 0.0,
                    "n={n} j={j} {got} {direct}"
                );
            }
        }
    }

    #[test]
    fn cauchy_off_node_origin() {
        // 0 falls between nodes: lo = -1.01
        let g = Grid1D::new(-1.01, 2.99, 512).unwrap();
        assert!(g.node_index(0.0).is_none());
        let f = SampledFunction::from_real_fn(g, None, |s| s.cos()).unwrap();
        let i = cauchy_iterated_integral(&f, 1).unwrap();
        for (j, x) in g.points().enumerate() {
            assert!((i.values()[j].re - x.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn quadrature_convergence_order() {
        let err = |n: usize| {
            let g = Grid1D::new(-1.0, 3.0, n).unwrap();
            let f = SampledFunction::from_real_fn(g, None, |s| s.exp() * (3.0 * s).cos()).unwrap();
            let i = cauchy_iterated_integral(&f, 1).unwrap();
            // antiderivative of e^s cos 3s vanishing at 0
            let exact = |x: f64| (x.exp() * ((3.0 * x).cos() + 3.0 * (3.0 * x).sin()) - 1.0) / 10.0;
            g.points()
                .enumerate()
                .map(|(j, x)| (i.values()[j].re - exact(x)).abs())
                .fold(0.0, f64::max)
        };
        let errs: Vec<f64> = [64, 128, 256, 512].iter().map(|&n| err(n)).collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 3.8, "order {order} from {errs:?}");
        }
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_cubic() {
        let g = Grid1D::new(-2.0, 2.0, 64).unwrap();
        let cubic = |x: f64| 0.3 * x * x * x - x + 0.5;
        let f = SampledFunction::from_real_fn(g, None, cubic).unwrap();
        for (j, x) in g.points().enumerate() {
            assert_eq!(f.interpolate(x), f.values()[j]);
        }
        for x in [-1.23, 0.0101, 1.5] {
            assert!((f.interpolate(x).re - cubic(x)).abs() < 1e-12);
        }
        assert_eq!(f.interpolate(50.0), c(0.0));
    }

    #[test]
    fn partial_derivatives_2d() {
        let g0 = Grid1D::new(-6.0, 6.0, 128).unwrap();
        let g1 = Grid1D::new(-5.0, 7.0, 128).unwrap();
        let f = |a: f64, b: f64| (-(a * a) - (b - 1.0).powi(2)).exp();
        let s = SampledFunction2::from_fn(g0, g1, |a, b| c(f(a, b))).unwrap();
        let d0 = s.partial_derivative(0).unwrap();
        let d1 = s.partial_derivative(1).unwrap();
        for (i0, a) in g0.points().enumerate().step_by(5) {
            for (i1, b) in g1.points().enumerate().step_by(7) {
                assert!((d0.get(i0, i1).re - (-2.0 * a * f(a, b))).abs() < 1e-10);
                assert!((d1.get(i0, i1).re - (-2.0 * (b - 1.0) * f(a, b))).abs() < 1e-10);
            }
        }
        assert!(s.partial_derivative(2).is_err());
    }
}
