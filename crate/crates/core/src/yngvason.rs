//! One-particle wedge flow of the massive model on a three-axis momentum
//! grid `(p0, p1, p2)`, its generator, and the finite-difference oracle the
//! generator is checked against.
//!
//! Light-cone momenta are `p_pm = p0 +/- p1`. The flow at scale `lambda`
//! resamples `phi` at the boosted momenta `(lambda p_+, p_- / lambda, p2)`
//! and multiplies by the ratio `F(-lambda p_+, -p_- / lambda, -p2) / F(-p)`.
//! With `lambda = e^{-2 pi t}` its `t`-derivative at zero is
//!
//! ```text
//! -2 pi (p0 d/dp1 + p1 d/dp0) phi  +  2 pi i p1 / (sqrt(p2^2 + m^2) - i p0) phi.
//! ```
//!
//! The boost prefactor and the orientation of the multiplication term are
//! configurable ([`YngvasonConventions`]) so that alternatives can be
//! compared against the oracle.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::diff::richardson;
use crate::specfun::{differentiate_line, stencil, Grid1D, SUPPORT_MARGIN_CELLS};
use crate::{Error, Interval, Result};

const STENCIL: usize = 6;

/// Complex values on the product of three uniform grids, stored with the
/// `p2` index fastest: `(i0 * n1 + i1) * n2 + i2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumGrid3 {
    axes: [Grid1D; 3],
    values: Vec<Complex64>,
    support: Option<[Interval; 3]>,
}

impl MomentumGrid3 {
    pub fn from_values(axes: [Grid1D; 3], values: Vec<Complex64>) -> Result<Self> {
        if values.len() != axes.iter().map(Grid1D::len).product::<usize>() {
            return Err(Error::Shape("value count does not match grid sizes"));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Numerical("sampled values must be finite"));
        }
        Ok(Self {
            axes,
            values,
            support: None,
        })
    }

    pub fn from_fn<F>(axes: [Grid1D; 3], f: F) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> Complex64,
    {
        let mut values = Vec::with_capacity(axes.iter().map(Grid1D::len).product());
        for p0 in axes[0].points() {
            for p1 in axes[1].points() {
                for p2 in axes[2].points() {
                    values.push(f(p0, p1, p2));
                }
            }
        }
        Self::from_values(axes, values)
    }

    /// Three identical axes `[-half_width, half_width)` with `n` points.
    pub fn centered_axes(n: usize, half_width: f64) -> Result<[Grid1D; 3]> {
        let g = Grid1D::new(-half_width, half_width, n)?;
        Ok([g; 3])
    }

    /// Isotropic Gaussian `exp(-|p - center|^2 / 2 sigma^2)`, declared
    /// supported on the box of half-width `cut * sigma`.
    pub fn gaussian(axes: [Grid1D; 3], center: [f64; 3], sigma: f64, cut: f64) -> Result<Self> {
        let g = Self::from_fn(axes, |a, b, c| {
            let r2 = (a - center[0]).powi(2) + (b - center[1]).powi(2) + (c - center[2]).powi(2);
            Complex64::new((-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
        })?;
        let r = cut * sigma;
        g.with_support([
            Interval::new(center[0] - r, center[0] + r),
            Interval::new(center[1] - r, center[1] + r),
            Interval::new(center[2] - r, center[2] + r),
        ])
    }

    pub fn zeros(axes: [Grid1D; 3]) -> Self {
        let n = axes.iter().map(Grid1D::len).product();
        Self {
            axes,
            values: vec![Complex64::new(0.0, 0.0); n],
            support: None,
        }
    }

    pub fn with_support(mut self, support: [Interval; 3]) -> Result<Self> {
        for (iv, g) in support.iter().zip(&self.axes) {
            if !inside_with_margin(*iv, g) {
                return Err(Error::Support(
                    "declared support must stay ten cells away from the grid ends",
                ));
            }
        }
        self.support = Some(support);
        Ok(self)
    }

    pub fn axes(&self) -> &[Grid1D; 3] {
        &self.axes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn support(&self) -> Option<[Interval; 3]> {
        self.support
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.axes[0].len(), self.axes[1].len(), self.axes[2].len()]
    }

    pub fn index(&self, i0: usize, i1: usize, i2: usize) -> usize {
        let [_, n1, n2] = self.shape();
        (i0 * n1 + i1) * n2 + i2
    }

    pub fn get(&self, i0: usize, i1: usize, i2: usize) -> Complex64 {
        self.values[self.index(i0, i1, i2)]
    }

    fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Grid1D::spacing).product()
    }

    pub fn l2_norm(&self) -> f64 {
        self.weighted_norm(|_, _, _| 1.0)
    }

    /// `sqrt(sum w(p) |phi(p)|^2 dV)`.
    pub fn weighted_norm<W>(&self, w: W) -> f64
    where
        W: Fn(f64, f64, f64) -> f64,
    {
        let mut acc = 0.0;
        let mut k = 0;
        for p0 in self.axes[0].points() {
            for p1 in self.axes[1].points() {
                for p2 in self.axes[2].points() {
                    acc += w(p0, p1, p2) * self.values[k].norm_sqr();
                    k += 1;
                }
            }
        }
        (acc * self.cell_volume()).sqrt()
    }

    fn check_same(&self, other: &MomentumGrid3) -> Result<()> {
        if self.axes == other.axes {
            Ok(())
        } else {
            Err(Error::Shape("momentum grids differ"))
        }
    }

    pub fn l2_distance(&self, other: &MomentumGrid3) -> Result<f64> {
        self.check_same(other)?;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.cell_volume()).sqrt())
    }

    /// `a * self + b * other`, without a support claim.
    pub fn combine(&self, a: Complex64, other: &MomentumGrid3, b: Complex64) -> Result<Self> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Ok(Self {
            axes: self.axes,
            values,
            support: None,
        })
    }

    /// Pointwise `c(p) * phi(p)`.
    pub fn multiply_pointwise<C>(&self, c: C) -> Result<Self>
    where
        C: Fn(f64, f64, f64) -> Complex64,
    {
        let mut values = Vec::with_capacity(self.values.len());
        let mut k = 0;
        for p0 in self.axes[0].points() {
            for p1 in self.axes[1].points() {
                for p2 in self.axes[2].points() {
                    values.push(c(p0, p1, p2) * self.values[k]);
                    k += 1;
                }
            }
        }
        let mut out = Self::from_values(self.axes, values)?;
        out.support = self.support;
        Ok(out)
    }

    /// Spectral first derivative along `axis` (0, 1 or 2).
    pub fn partial_derivative(&self, axis: usize) -> Result<Self> {
        if axis > 2 {
            return Err(Error::InvalidParameter("axis must be 0, 1 or 2"));
        }
        let [n0, n1, n2] = self.shape();
        let stride = match axis {
            0 => n1 * n2,
            1 => n2,
            _ => 1,
        };
        let len = self.axes[axis].len();
        let ik = |xi: f64| Complex64::new(0.0, xi);
        let mut out = self.values.clone();
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let starts: Vec<usize> = match axis {
            0 => (0..n1 * n2).collect(),
            1 => (0..n0)
                .flat_map(|i0| (0..n2).map(move |i2| i0 * n1 * n2 + i2))
                .collect(),
            _ => (0..n0 * n1).map(|r| r * n2).collect(),
        };
        for start in starts {
            for (j, v) in line.iter_mut().enumerate() {
                *v = self.values[start + j * stride];
            }
            let d = differentiate_line(self.axes[axis], &line, &ik)?;
            for (j, v) in d.into_iter().enumerate() {
                out[start + j * stride] = v;
            }
        }
        let mut r = Self::from_values(self.axes, out)?;
        r.support = self.support;
        Ok(r)
    }
}

fn inside_with_margin(iv: Interval, g: &Grid1D) -> bool {
    let margin = SUPPORT_MARGIN_CELLS * g.spacing();
    !iv.is_empty() && iv.lo > g.lo() + margin && iv.hi < g.hi() - margin
}

/// The analytic factor `F` of the two-point function weight, evaluated at
/// Cartesian momenta `(p0, p1, p2)`.
pub trait SpectralFactor {
    fn eval(&self, p0: f64, p1: f64, p2: f64) -> Complex64;
}

impl<F> SpectralFactor for F
where
    F: Fn(f64, f64, f64) -> Complex64,
{
    fn eval(&self, p0: f64, p1: f64, p2: f64) -> Complex64 {
        self(p0, p1, p2)
    }
}

/// `F(p) = sqrt(p2^2 + m^2) + (i/2)(p_+ + p_-) = sqrt(p2^2 + m^2) + i p0`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YngvasonFactor {
    pub mass: f64,
}

impl YngvasonFactor {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter("mass must be finite and non-negative"));
        }
        Ok(Self { mass })
    }

    /// `F(p) F(-p) = p0^2 + p2^2 + m^2`, the weight that makes the flow
    /// unitary.
    pub fn weight(&self, p0: f64, _p1: f64, p2: f64) -> f64 {
        p0 * p0 + p2 * p2 + self.mass * self.mass
    }
}

impl SpectralFactor for YngvasonFactor {
    fn eval(&self, p0: f64, _p1: f64, p2: f64) -> Complex64 {
        Complex64::new(p2.hypot(self.mass), p0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantFactor(pub Complex64);

impl SpectralFactor for ConstantFactor {
    fn eval(&self, _: f64, _: f64, _: f64) -> Complex64 {
        self.0
    }
}

/// `(p0, p1)` after scaling `p_+ -> lambda p_+`, `p_- -> p_- / lambda`.
pub fn boost_momenta(lambda: f64, p0: f64, p1: f64) -> (f64, f64) {
    let (pp, pm) = (lambda * (p0 + p1), (p0 - p1) / lambda);
    ((pp + pm) / 2.0, (pp - pm) / 2.0)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("lambda must be positive and finite"))
    }
}

/// Bounding box in `(p0, p1)` of the points that the flow maps into the
/// box `b0 x b1`.
fn preimage_box(lambda: f64, b0: Interval, b1: Interval) -> (Interval, Interval) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for q0 in [b0.lo, b0.hi] {
        for q1 in [b1.lo, b1.hi] {
            let (p0, p1) = boost_momenta(1.0 / lambda, q0, q1);
            for (k, v) in [p0, p1].into_iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
    }
    (Interval::new(lo[0], hi[0]), Interval::new(lo[1], hi[1]))
}

/// The flow at scale `lambda`. At `lambda = 1` the input is returned as is.
pub fn v_flow<F: SpectralFactor + ?Sized>(lambda: f64, phi: &MomentumGrid3, f: &F) -> Result<MomentumGrid3> {
    check_lambda(lambda)?;
    if lambda == 1.0 {
        return Ok(phi.clone());
    }
    let [g0, g1, g2] = *phi.axes();
    let support = match phi.support() {
        Some([b0, b1, b2]) => {
            let (s0, s1) = preimage_box(lambda, b0, b1);
            if !inside_with_margin(s0, &g0) || !inside_with_margin(s1, &g1) {
                let worst = s0.lo.abs().max(s0.hi.abs()).max(s1.lo.abs()).max(s1.hi.abs());
                return Err(Error::domain("v_flow: boosted support leaves the grid", lambda, worst));
            }
            Some([s0, s1, b2])
        }
        None => None,
    };
    let [n0, n1, n2] = phi.shape();
    let src = phi.values();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    let mut row = vec![Complex64::new(0.0, 0.0); n2];
    for (i0, p0) in g0.points().enumerate() {
        for (i1, p1) in g1.points().enumerate() {
            let (q0, q1) = boost_momenta(lambda, p0, p1);
            let (Some((a0, w0)), Some((a1, w1))) = (stencil::<STENCIL>(&g0, q0), stencil::<STENCIL>(&g1, q1)) else {
                continue;
            };
            row.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            for (ja, wa) in w0.iter().enumerate() {
                let ia = a0 + ja as isize;
                if !(0..n0 as isize).contains(&ia) {
                    continue;
                }
                for (jb, wb) in w1.iter().enumerate() {
                    let ib = a1 + jb as isize;
                    if !(0..n1 as isize).contains(&ib) {
                        continue;
                    }
                    let w = wa * wb;
                    let base = (ia as usize * n1 + ib as usize) * n2;
                    for (r, s) in row.iter_mut().zip(&src[base..base + n2]) {
                        *r += s * w;
                    }
                }
            }
            let base = (i0 * n1 + i1) * n2;
            for ((i2, p2), r) in g2.points().enumerate().zip(&row) {
                let ratio = f.eval(-q0, -q1, -p2) / f.eval(-p0, -p1, -p2);
                out[base + i2] = ratio * r;
            }
        }
    }
    let mut r =
        MomentumGrid3::from_values(phi.axes, out).map_err(|_| Error::Numerical("F ratio is not finite on the grid"))?;
    r.support = support;
    Ok(r)
}

/// Magnitude of the boost coefficient in the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BoostPrefactor {
    /// `-2 pi`, as obtained by differentiating the boost with `lambda = e^{-2 pi t}`.
    #[default]
    TwoPi,
    /// `-4 pi`, as printed for the massive example.
    FourPi,
}

impl BoostPrefactor {
    pub fn value(self) -> f64 {
        match self {
            BoostPrefactor::TwoPi => -2.0 * PI,
            BoostPrefactor::FourPi => -4.0 * PI,
        }
    }
}

/// Orientation of the multiplication (F-ratio) term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum RatioOrientation {
    /// `+ (2 pi / G)(p_+ d_+ - p_- d_-) G` with `G(p) = F(-p)`, i.e. the
    /// symbol `-2 pi i p1 / (sqrt(p2^2 + m^2) - i p0)` for the massive factor.
    AsPrinted,
    /// The derivative of the ratio along the flow: the negative of
    /// `AsPrinted`.
    #[default]
    FlowDerived,
}

impl RatioOrientation {
    pub fn sign(self) -> f64 {
        match self {
            RatioOrientation::AsPrinted => 1.0,
            RatioOrientation::FlowDerived => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YngvasonConventions {
    pub boost: BoostPrefactor,
    pub ratio: RatioOrientation,
}

impl YngvasonConventions {
    pub const ALL: [YngvasonConventions; 4] = [
        YngvasonConventions {
            boost: BoostPrefactor::TwoPi,
            ratio: RatioOrientation::AsPrinted,
        },
        YngvasonConventions {
            boost: BoostPrefactor::FourPi,
            ratio: RatioOrientation::AsPrinted,
        },
        YngvasonConventions {
            boost: BoostPrefactor::TwoPi,
            ratio: RatioOrientation::FlowDerived,
        },
        YngvasonConventions {
            boost: BoostPrefactor::FourPi,
            ratio: RatioOrientation::FlowDerived,
        },
    ];
}

/// `-2 pi i p1 / (sqrt(p2^2 + m^2) - i p0)`.
pub fn dr_symbol(p0: f64, p1: f64, p2: f64, m: f64) -> Result<Complex64> {
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter("mass must be finite and non-negative"));
    }
    let den = Complex64::new(p2.hypot(m), -p0);
    if den.re == 0.0 && den.im == 0.0 {
        return Err(Error::domain("dr_symbol: vanishing denominator", 0.0, p1));
    }
    Ok(Complex64::new(0.0, -2.0 * PI * p1) / den)
}

/// `(p0 d/dp1 + p1 d/dp0) phi`, without prefactor.
pub fn boost_vector_field(phi: &MomentumGrid3) -> Result<MomentumGrid3> {
    let d0 = phi.partial_derivative(0)?;
    let d1 = phi.partial_derivative(1)?;
    let a = d1.multiply_pointwise(|p0, _, _| Complex64::new(p0, 0.0))?;
    let b = d0.multiply_pointwise(|_, p1, _| Complex64::new(p1, 0.0))?;
    let one = Complex64::new(1.0, 0.0);
    a.combine(one, &b, one)
}

pub fn boost_term(phi: &MomentumGrid3, prefactor: BoostPrefactor) -> Result<MomentumGrid3> {
    let v = boost_vector_field(phi)?;
    let s = Complex64::new(prefactor.value(), 0.0);
    v.combine(s, &MomentumGrid3::zeros(*phi.axes()), Complex64::new(0.0, 0.0))
}

/// The order-zero multiplication part for mass `m`.
pub fn multiplication_term(phi: &MomentumGrid3, m: f64, orientation: RatioOrientation) -> Result<MomentumGrid3> {
    dr_symbol(0.0, 0.0, 1.0, m)?;
    let sign = orientation.sign();
    // points where phi vanishes are skipped so a massless symbol only fails
    // where it would actually be used
    let mut values = Vec::with_capacity(phi.values().len());
    let mut k = 0;
    for p0 in phi.axes()[0].points() {
        for p1 in phi.axes()[1].points() {
            for p2 in phi.axes()[2].points() {
                let v = phi.values()[k];
                k += 1;
                if v.norm_sqr() == 0.0 {
                    values.push(v);
                } else {
                    values.push(dr_symbol(p0, p1, p2, m)? * sign * v);
                }
            }
        }
    }
    MomentumGrid3::from_values(*phi.axes(), values)
}

/// The generator of the massive model under the given conventions.
pub fn yngvason_generator(phi: &MomentumGrid3, m: f64, conv: YngvasonConventions) -> Result<MomentumGrid3> {
    let b = boost_term(phi, conv.boost)?;
    let r = multiplication_term(phi, m, conv.ratio)?;
    let one = Complex64::new(1.0, 0.0);
    b.combine(one, &r, one)
}

/// Step of the fourth-order central differences applied to `F`.
const F_STEP: f64 = 1e-3;

fn fd4<G: Fn(f64) -> Complex64>(g: G, x: f64) -> Complex64 {
    let h = F_STEP * (1.0 + x.abs());
    (g(x - 2.0 * h) - g(x - h) * 8.0 + g(x + h) * 8.0 - g(x + 2.0 * h)) / (12.0 * h)
}

/// The generator for an arbitrary analytic factor `F`, with the F-term
/// `(2 pi / G)(p1 d/dp0 + p0 d/dp1) G`, `G(p) = F(-p)`, evaluated by finite
/// differences.
pub fn yngvason_general_generator<F: SpectralFactor + ?Sized>(
    phi: &MomentumGrid3,
    f: &F,
    conv: YngvasonConventions,
) -> Result<MomentumGrid3> {
    let b = boost_term(phi, conv.boost)?;
    let sign = conv.ratio.sign();
    let mut values = Vec::with_capacity(phi.values().len());
    let mut k = 0;
    for p0 in phi.axes()[0].points() {
        for p1 in phi.axes()[1].points() {
            for p2 in phi.axes()[2].points() {
                let v = phi.values()[k];
                k += 1;
                if v.norm_sqr() == 0.0 {
                    values.push(v);
                    continue;
                }
                let g = f.eval(-p0, -p1, -p2);
                if g.norm() < 1e-12 {
                    return Err(Error::Numerical("F vanishes on the support"));
                }
                let d0 = fd4(|s| f.eval(-s, -p1, -p2), p0);
                let d1 = fd4(|s| f.eval(-p0, -s, -p2), p1);
                let term = (d0 * p1 + d1 * p0) / g * (2.0 * PI * sign);
                values.push(term * v);
            }
        }
    }
    let r = MomentumGrid3::from_values(*phi.axes(), values)?;
    let one = Complex64::new(1.0, 0.0);
    b.combine(one, &r, one)
}

/// Richardson-extrapolated `d/dt v_flow(e^{-2 pi t}, phi)` at `t = 0`.
pub fn yngvason_oracle<F: SpectralFactor + ?Sized>(phi: &MomentumGrid3, f: &F, h: f64) -> Result<MomentumGrid3> {
    let values = richardson(h, |t| v_flow((-2.0 * PI * t).exp(), phi, f).map(|g| g.values))?;
    MomentumGrid3::from_values(*phi.axes(), values)
}

/// Oracle comparison for one mass.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecompositionRun {
    pub mass: f64,
    /// `||oracle - generator|| / ||phi||` for each of
    /// [`YngvasonConventions::ALL`], in that order.
    pub residuals: [f64; 4],
    /// `||boost term|| / ||phi||` at the `-2 pi` prefactor.
    pub boost_norm: f64,
    /// `||multiplication term|| / ||phi||`.
    pub dr_norm: f64,
    /// `||oracle|| / ||phi||`.
    pub oracle_norm: f64,
    /// `||oracle - boost term (-2 pi)|| / ||phi||`: what the oracle leaves
    /// after removing the local part.
    pub oracle_minus_boost: f64,
}

impl DecompositionRun {
    pub fn residual(&self, conv: YngvasonConventions) -> f64 {
        let i = YngvasonConventions::ALL.iter().position(|c| *c == conv).unwrap_or(0);
        self.residuals[i]
    }
}

pub fn yngvason_decomposition(phi: &MomentumGrid3, m: f64, h: f64) -> Result<DecompositionRun> {
    let f = YngvasonFactor::new(m)?;
    let oracle = yngvason_oracle(phi, &f, h)?;
    let scale = phi.l2_norm();
    let rel = |d: f64| if scale > 0.0 { d / scale } else { d };
    let field = boost_vector_field(phi)?;
    let printed = multiplication_term(phi, m, RatioOrientation::AsPrinted)?;
    let mut residuals = [0.0; 4];
    for (slot, conv) in residuals.iter_mut().zip(YngvasonConventions::ALL) {
        let g = field.combine(
            Complex64::new(conv.boost.value(), 0.0),
            &printed,
            Complex64::new(conv.ratio.sign(), 0.0),
        )?;
        *slot = rel(g.l2_distance(&oracle)?);
    }
    let boost = boost_term(phi, BoostPrefactor::TwoPi)?;
    Ok(DecompositionRun {
        mass: m,
        residuals,
        boost_norm: rel(boost.l2_norm()),
        dr_norm: rel(printed.l2_norm()),
        oracle_norm: rel(oracle.l2_norm()),
        oracle_minus_boost: rel(oracle.l2_distance(&boost)?),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConventionResolution {
    /// The unique convention within tolerance for every run, if any.
    pub winner: Option<YngvasonConventions>,
    /// Worst residual per entry of [`YngvasonConventions::ALL`].
    pub max_residuals: [f64; 4],
    pub tolerance: f64,
}

pub fn resolve_yngvason_conventions(runs: &[DecompositionRun], tolerance: f64) -> ConventionResolution {
    let mut max_residuals = [0.0f64; 4];
    for r in runs {
        for (m, v) in max_residuals.iter_mut().zip(r.residuals) {
            *m = m.max(v);
        }
    }
    let passing: Vec<usize> = (0..4).filter(|&i| max_residuals[i] <= tolerance).collect();
    let winner = match passing.as_slice() {
        [i] => Some(YngvasonConventions::ALL[*i]),
        _ => None,
    };
    ConventionResolution {
        winner,
        max_residuals,
        tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_gaussian() -> MomentumGrid3 {
        let axes = MomentumGrid3::centered_axes(64, 8.0).unwrap();
        MomentumGrid3::gaussian(axes, [0.2, -0.1, 0.1], 1.0, 4.5).unwrap()
    }

    #[test]
    fn dr_symbol_examples() {
        assert_eq!(dr_symbol(0.7, 0.0, -0.4, 1.0).unwrap().norm(), 0.0);
        let v = dr_symbol(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!((v - Complex64::new(0.0, -2.0 * PI)).norm() < 1e-15);
        assert!(dr_symbol(0.0, 1.0, 0.0, 0.0).unwrap_err().is_domain());
        assert!(dr_symbol(0.5, 1.0, 0.0, 0.0).is_ok());
        assert!(dr_symbol(0.0, 1.0, 0.0, -1.0).is_err());
        for &(p0, p1, p2, m) in &[(3.0, -2.0, 1.0, 0.5), (-10.0, 40.0, 0.0, 2.0), (0.0, 1e3, 5.0, 1.0)] {
            let v = dr_symbol(p0, p1, p2, m).unwrap();
            assert!(v.norm() <= 2.0 * PI * f64::abs(p1) / m * (1.0 + 1e-15));
        }
    }

    #[test]
    fn factor_and_weight() {
        let f = YngvasonFactor::new(1.5).unwrap();
        let (p0, p1, p2) = (0.4, -1.1, 0.9);
        let ff = f.eval(p0, p1, p2) * f.eval(-p0, -p1, -p2);
        assert!((ff.re - f.weight(p0, p1, p2)).abs() < 1e-14 && ff.im.abs() < 1e-14);
        assert!(YngvasonFactor::new(-1.0).is_err());
    }

    #[test]
    fn identity_at_lambda_one() {
        let phi = small_gaussian();
        let f = YngvasonFactor::new(1.0).unwrap();
        assert_eq!(v_flow(1.0, &phi, &f).unwrap(), phi);
        assert!(v_flow(0.0, &phi, &f).is_err());
    }

    #[test]
    fn boosted_support_leaving_grid_is_domain_error() {
        let phi = small_gaussian();
        let f = YngvasonFactor::new(1.0).unwrap();
        assert!(v_flow(4.0, &phi, &f).unwrap_err().is_domain());
    }

    #[test]
    fn huge_mass_is_pure_boost() {
        let phi = small_gaussian();
        let lambda = 1.1;
        let heavy = v_flow(lambda, &phi, &YngvasonFactor::new(1e6).unwrap()).unwrap();
        let bare = v_flow(lambda, &phi, &ConstantFactor(Complex64::new(1.0, 0.0))).unwrap();
        assert!(heavy.l2_distance(&bare).unwrap() < 1e-5 * phi.l2_norm());
    }

    #[test]
    fn boost_momenta_preserve_light_cone_product() {
        let (q0, q1) = boost_momenta(1.7, 0.4, 1.3);
        assert!(((q0 * q0 - q1 * q1) - (0.4f64.powi(2) - 1.3f64.powi(2))).abs() < 1e-14);
        let (r0, r1) = boost_momenta(1.0 / 1.7, q0, q1);
        assert!((r0 - 0.4).abs() < 1e-15 && (r1 - 1.3).abs() < 1e-15);
    }

    #[test]
    fn multiplication_term_scales_like_inverse_mass() {
        let phi = small_gaussian();
        let a = multiplication_term(&phi, 100.0, RatioOrientation::AsPrinted)
            .unwrap()
            .l2_norm();
        let b = multiplication_term(&phi, 200.0, RatioOrientation::AsPrinted)
            .unwrap()
            .l2_norm();
        assert!((a / b - 2.0).abs() < 1e-3);
    }

    #[test]
    fn general_generator_constant_factor_is_boost() {
        let phi = small_gaussian();
        let c = ConstantFactor(Complex64::new(2.0, -1.0));
        let conv = YngvasonConventions::default();
        let g = yngvason_general_generator(&phi, &c, conv).unwrap();
        let b = boost_term(&phi, conv.boost).unwrap();
        assert!(g.l2_distance(&b).unwrap() < 1e-13 * b.l2_norm());
        let z = ConstantFactor(Complex64::new(0.0, 0.0));
        assert!(matches!(
            yngvason_general_generator(&phi, &z, conv),
            Err(Error::Numerical(_))
        ));
    }

    #[test]
    fn general_generator_matches_specialized() {
        let phi = small_gaussian();
        for conv in YngvasonConventions::ALL {
            for m in [0.5, 2.0] {
                let f = YngvasonFactor::new(m).unwrap();
                let g = yngvason_general_generator(&phi, &f, conv).unwrap();
                let s = yngvason_generator(&phi, m, conv).unwrap();
                assert!(g.l2_distance(&s).unwrap() < 1e-6 * phi.l2_norm());
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let axes = MomentumGrid3::centered_axes(16, 4.0).unwrap();
        let z = MomentumGrid3::zeros(axes);
        let f = YngvasonFactor::new(1.0).unwrap();
        assert_eq!(yngvason_oracle(&z, &f, 1e-3).unwrap().l2_norm(), 0.0);
        assert_eq!(
            yngvason_general_generator(&z, &f, YngvasonConventions::default())
                .unwrap()
                .l2_norm(),
            0.0
        );
    }

    #[test]
    fn oracle_selects_flow_derived_two_pi() {
        let phi = small_gaussian();
        let runs: Vec<_> = [0.5, 2.0]
            .iter()
            .map(|&m| yngvason_decomposition(&phi, m, 1e-3).unwrap())
            .collect();
        let res = resolve_yngvason_conventions(&runs, 1e-3);
        assert_eq!(res.winner, Some(YngvasonConventions::default()));
        assert!(runs[0].dr_norm > runs[1].dr_norm);
    }

    #[test]
    fn flow_preserves_factorized_weight() {
        let axes = MomentumGrid3::centered_axes(64, 8.0).unwrap();
        let phi = MomentumGrid3::gaussian(axes, [0.5, 1.0, 0.0], 0.8, 4.5).unwrap();
        let m = 1.0;
        let f = YngvasonFactor::new(m).unwrap();
        let moved = v_flow(1.1, &phi, &f).unwrap();
        let w = |p0: f64, p1: f64, p2: f64| f.weight(p0, p1, p2);
        let (a, b) = (phi.weighted_norm(w), moved.weighted_norm(w));
        assert!((a - b).abs() < 1e-5 * a, "{a} {b}");
        // summing the spatial momenta instead is not boost invariant
        let spatial = |_: f64, p1: f64, p2: f64| p1 * p1 + p2 * p2 + m * m;
        let (c, d) = (phi.weighted_norm(spatial), moved.weighted_norm(spatial));
        assert!((c - d).abs() > 1e-3 * c, "{c} {d}");
    }
}
