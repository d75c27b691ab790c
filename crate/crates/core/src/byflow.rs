//! Thermal modular flows on the half-lines and on the two-dimensional
//! regions built from them.
//!
//! On the positive half-line the flow at inverse temperature `beta` is
//!
//! ```text
//! nu_plus(t, x) = beta / (2 pi) * ln(1 + e^{-2 pi t} (e^{2 pi x / beta} - 1))
//! ```
//!
//! defined where the logarithm's argument is positive, and the negative
//! half-line flow is the mirror image `nu_minus(t, x) = -nu_plus(-t, -x)`.
//! Near `x = 0` both are evaluated through `expm1` / `ln_1p` so that the
//! fixed point at the origin is reproduced to full relative precision.

use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::lcgeom::{boost_flow, conformal_dc_flow, dilation_flow, HalfLineAxis, LightConePoint, Region};
use crate::{Coordinate, Error, Result};

/// Above this value of `2 pi x / beta` the flow is evaluated in a factored
/// form that avoids overflowing `expm1`.
const LARGE_EXPONENT: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThermalFlowParams {
    beta: f64,
}

impl ThermalFlowParams {
    pub fn new(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("beta must be positive and finite"))
    }
}

/// The admissibility inequality `1 + e^{-2 pi t}(e^{2 pi x / beta} - 1) > 0`.
pub fn admissible_plus(t: f64, x: f64, beta: f64) -> bool {
    let a = (-2.0 * PI * t).exp();
    let z = 2.0 * PI * x / beta;
    if z > LARGE_EXPONENT {
        return true;
    }
    a * z.exp_m1() > -1.0
}

/// The mirrored inequality `1 + e^{2 pi t}(e^{-2 pi x / beta} - 1) > 0`.
pub fn admissible_minus(t: f64, x: f64, beta: f64) -> bool {
    admissible_plus(-t, -x, beta)
}

pub fn nu_plus(t: f64, x: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !admissible_plus(t, x, beta) {
        return Err(Error::domain("nu_plus", t, x));
    }
    if t == 0.0 {
        return Ok(x);
    }
    let scale = beta / (2.0 * PI);
    let z = 2.0 * PI * x / beta;
    let value = if z > LARGE_EXPONENT {
        // 1 + a(e^z - 1) = a e^z (1 + (e^{2 pi t} - 1) e^{-z})
        let r = (2.0 * PI * t).exp_m1() * (-z).exp();
        scale * (z - 2.0 * PI * t + r.ln_1p())
    } else {
        let a = (-2.0 * PI * t).exp();
        scale * (a * z.exp_m1()).ln_1p()
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numerical("nu_plus overflowed"))
    }
}

pub fn nu_minus(t: f64, x: f64, beta: f64) -> Result<f64> {
    match nu_plus(-t, -x, beta) {
        Ok(v) => Ok(-v),
        Err(Error::Domain { .. }) => Err(Error::domain("nu_minus", t, x)),
        Err(e) => Err(e),
    }
}

/// Apply the half-line flow for `axis`.
pub fn nu_axis(axis: HalfLineAxis, t: f64, x: f64, beta: f64) -> Result<f64> {
    match axis {
        HalfLineAxis::Plus => nu_plus(t, x, beta),
        HalfLineAxis::Minus => nu_minus(t, x, beta),
    }
}

/// Velocity field of the half-line flow at `t = 0`:
/// `-beta (1 - e^{-2 pi x / beta})` on the positive axis and
/// `-beta (1 - e^{2 pi x / beta})` on the negative one.
pub fn thermal_velocity(axis: HalfLineAxis, x: f64, beta: f64) -> f64 {
    match axis {
        HalfLineAxis::Plus => beta * (-2.0 * PI * x / beta).exp_m1(),
        HalfLineAxis::Minus => beta * (2.0 * PI * x / beta).exp_m1(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FlowKind {
    /// Thermal flow; each light-cone coordinate gets `nu_plus` or `nu_minus`
    /// according to [`Region::thermal_axes`].
    Thermal(ThermalFlowParams),
    Dilation,
    Boost,
    /// Conformal flow of the standard double cone, applied to both
    /// coordinates with parameter `s = t`.
    ConformalDc,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlowSpec {
    pub kind: FlowKind,
    pub region: Region,
}

impl FlowSpec {
    pub fn thermal(beta: f64, region: Region) -> Result<Self> {
        Ok(Self {
            kind: FlowKind::Thermal(ThermalFlowParams::new(beta)?),
            region,
        })
    }

    pub fn geometric(kind: FlowKind, region: Region) -> Self {
        Self { kind, region }
    }
}

pub fn flow_region(spec: &FlowSpec, t: f64, q: LightConePoint) -> Result<LightConePoint> {
    match spec.kind {
        FlowKind::Dilation => Ok(dilation_flow(t, q)),
        FlowKind::Boost => Ok(boost_flow(t, q)),
        FlowKind::ConformalDc => Ok(LightConePoint {
            xp: conformal_dc_flow(t, q.xp).map_err(|e| e.on_coordinate(Coordinate::Plus))?,
            xm: conformal_dc_flow(t, q.xm).map_err(|e| e.on_coordinate(Coordinate::Minus))?,
        }),
        FlowKind::Thermal(params) => {
            let beta = params.beta();
            let (minus_axis, plus_axis) = spec.region.thermal_axes();
            let xm = match minus_axis {
                Some(axis) => nu_axis(axis, t, q.xm, beta).map_err(|e| e.on_coordinate(Coordinate::Minus))?,
                None => q.xm,
            };
            let xp = match plus_axis {
                Some(axis) => nu_axis(axis, t, q.xp, beta).map_err(|e| e.on_coordinate(Coordinate::Plus))?,
                None => q.xp,
            };
            Ok(LightConePoint { xp, xm })
        }
    }
}
