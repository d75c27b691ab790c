//! Two-dimensional Minkowski geometry in light-cone coordinates.
//!
//! Points are `(x0, x1)` in Cartesian form or `(xp, xm) = (x0 + x1, x0 - x1)`
//! in light-cone form. All regions are open; boundary points are outside.

use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::{Error, Interval, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpacetimePoint {
    pub x0: f64,
    pub x1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LightConePoint {
    pub xp: f64,
    pub xm: f64,
}

impl SpacetimePoint {
    pub const fn new(x0: f64, x1: f64) -> Self {
        Self { x0, x1 }
    }

    /// Minkowski square `x0^2 - x1^2`.
    pub fn square(&self) -> f64 {
        self.x0 * self.x0 - self.x1 * self.x1
    }
}

impl LightConePoint {
    pub const fn new(xp: f64, xm: f64) -> Self {
        Self { xp, xm }
    }
}

impl From<SpacetimePoint> for LightConePoint {
    fn from(p: SpacetimePoint) -> Self {
        to_lightcone(p)
    }
}

impl From<LightConePoint> for SpacetimePoint {
    fn from(q: LightConePoint) -> Self {
        from_lightcone(q)
    }
}

pub fn to_lightcone(p: SpacetimePoint) -> LightConePoint {
    LightConePoint {
        xp: p.x0 + p.x1,
        xm: p.x0 - p.x1,
    }
}

pub fn from_lightcone(q: LightConePoint) -> SpacetimePoint {
    SpacetimePoint {
        x0: 0.5 * (q.xp + q.xm),
        x1: 0.5 * (q.xp - q.xm),
    }
}

/// Which thermal half-line flow acts on a light-cone coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum HalfLineAxis {
    /// The coordinate ranges over the positive half-line; `nu_plus` acts.
    Plus,
    /// The coordinate ranges over the negative half-line; `nu_minus` acts.
    Minus,
}

/// Open spacetime regions.
///
/// The half-line regions are chiral: they constrain only `x_plus`
/// (`HalfLinePlus` is `x_plus > 0`, `HalfLineMinus` is `x_plus < 0`) and
/// leave `x_minus` free.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Region {
    RightWedge,
    LeftWedge,
    ForwardCone,
    BackwardCone,
    /// `x_minus` in `minus` (inside the negative half-line) and `x_plus` in
    /// `plus` (inside the positive half-line). Construct it with
    /// [`Region::double_cone`] to get the invariants checked.
    DoubleCone {
        minus: Interval,
        plus: Interval,
    },
    HalfLinePlus,
    HalfLineMinus,
}

impl Region {
    pub fn double_cone(minus: Interval, plus: Interval) -> Result<Self> {
        let bounded = |i: &Interval| i.lo.is_finite() && i.hi.is_finite() && !i.is_empty();
        if !bounded(&minus) || !bounded(&plus) {
            return Err(Error::InvalidParameter(
                "double-cone intervals must be bounded and non-empty",
            ));
        }
        if minus.hi > 0.0 || plus.lo < 0.0 {
            return Err(Error::InvalidParameter(
                "double-cone intervals must satisfy I_minus in R_- and I_plus in R_+",
            ));
        }
        Ok(Region::DoubleCone { minus, plus })
    }

    /// Thermal axis assignment `(for x_minus, for x_plus)`, following the
    /// tensor factorization of the region's algebra. `None` marks a
    /// coordinate the region does not constrain.
    pub fn thermal_axes(&self) -> (Option<HalfLineAxis>, Option<HalfLineAxis>) {
        use HalfLineAxis::{Minus, Plus};
        match self {
            Region::RightWedge | Region::DoubleCone { .. } => (Some(Minus), Some(Plus)),
            Region::LeftWedge => (Some(Plus), Some(Minus)),
            Region::ForwardCone => (Some(Plus), Some(Plus)),
            Region::BackwardCone => (Some(Minus), Some(Minus)),
            Region::HalfLinePlus => (None, Some(Plus)),
            Region::HalfLineMinus => (None, Some(Minus)),
        }
    }

    pub fn contains_lightcone(&self, q: LightConePoint) -> bool {
        let LightConePoint { xp, xm } = q;
        match self {
            Region::RightWedge => xp > 0.0 && xm < 0.0,
            Region::LeftWedge => xp < 0.0 && xm > 0.0,
            Region::ForwardCone => xp > 0.0 && xm > 0.0,
            Region::BackwardCone => xp < 0.0 && xm < 0.0,
            Region::DoubleCone { minus, plus } => minus.contains_open(xm) && plus.contains_open(xp),
            Region::HalfLinePlus => xp > 0.0,
            Region::HalfLineMinus => xp < 0.0,
        }
    }
}

/// Membership in the open region. Wedges and cones are tested in Cartesian
/// form as written (`|x0| < x1`, `x.x > 0 && x0 > 0`), the rest through
/// light-cone coordinates.
pub fn region_contains(r: &Region, p: SpacetimePoint) -> bool {
    match r {
        Region::RightWedge => p.x0.abs() < p.x1,
        Region::LeftWedge => p.x0.abs() < -p.x1,
        Region::ForwardCone => p.square() > 0.0 && p.x0 > 0.0,
        Region::BackwardCone => p.square() > 0.0 && p.x0 < 0.0,
        _ => r.contains_lightcone(to_lightcone(p)),
    }
}

/// Lorentz boost with rapidity `2 pi t`.
pub fn boost_flow(t: f64, q: LightConePoint) -> LightConePoint {
    let s = 2.0 * PI * t;
    LightConePoint {
        xp: (-s).exp() * q.xp,
        xm: s.exp() * q.xm,
    }
}

pub fn dilation_flow(t: f64, q: LightConePoint) -> LightConePoint {
    let k = (-2.0 * PI * t).exp();
    LightConePoint {
        xp: k * q.xp,
        xm: k * q.xm,
    }
}

/// Conformal flow of the standard double cone acting on one light-cone
/// coordinate in `(-1, 1)`:
///
/// `x(s) = (1 + x - e^{-s}(1 - x)) / (1 + x + e^{-s}(1 - x))`.
pub fn conformal_dc_flow(s: f64, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::domain("conformal_dc_flow", s, x));
    }
    if s == 0.0 {
        return Ok(x);
    }
    let e = (-s).exp();
    let num = 1.0 + x - e * (1.0 - x);
    let den = 1.0 + x + e * (1.0 - x);
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lightcone_examples() {
        assert_eq!(
            to_lightcone(SpacetimePoint::new(1.0, 0.0)),
            LightConePoint::new(1.0, 1.0)
        );
        assert_eq!(
            to_lightcone(SpacetimePoint::new(0.0, 0.0)),
            LightConePoint::new(0.0, 0.0)
        );
        let q = to_lightcone(SpacetimePoint::new(0.3, 0.1));
        assert!((q.xp - 0.4).abs() < 1e-15 && (q.xm - 0.2).abs() < 1e-15);

        assert_eq!(
            from_lightcone(LightConePoint::new(1.0, 1.0)),
            SpacetimePoint::new(1.0, 0.0)
        );
        assert_eq!(
            from_lightcone(LightConePoint::new(0.0, 0.0)),
            SpacetimePoint::new(0.0, 0.0)
        );
        assert_eq!(
            from_lightcone(LightConePoint::new(2.0, -2.0)),
            SpacetimePoint::new(0.0, 2.0)
        );
    }

    #[test]
    fn region_examples() {
        assert!(region_contains(&Region::RightWedge, SpacetimePoint::new(0.0, 1.0)));
        assert!(region_contains(&Region::ForwardCone, SpacetimePoint::new(1.0, 0.5)));
        assert!(!region_contains(&Region::RightWedge, SpacetimePoint::new(2.0, 1.0)));
        // boundaries are excluded
        assert!(!region_contains(&Region::RightWedge, SpacetimePoint::new(1.0, 1.0)));
        assert!(!region_contains(&Region::ForwardCone, SpacetimePoint::new(1.0, 1.0)));
        assert!(region_contains(&Region::LeftWedge, SpacetimePoint::new(0.5, -1.0)));
        assert!(region_contains(&Region::BackwardCone, SpacetimePoint::new(-1.0, 0.5)));
    }

    #[test]
    fn cartesian_and_lightcone_membership_agree() {
        let regions = [
            Region::RightWedge,
            Region::LeftWedge,
            Region::ForwardCone,
            Region::BackwardCone,
        ];
        for i in -8..=8 {
            for j in -8..=8 {
                let p = SpacetimePoint::new(i as f64 * 0.25, j as f64 * 0.25);
                for r in &regions {
                    assert_eq!(
                        region_contains(r, p),
                        r.contains_lightcone(to_lightcone(p)),
                        "{r:?} at {p:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn double_cone_validation() {
        let dc = Region::double_cone(Interval::new(-1.0, -0.2), Interval::new(0.3, 2.0)).unwrap();
        // x_plus = 1, x_minus = -0.5
        assert!(region_contains(&dc, from_lightcone(LightConePoint::new(1.0, -0.5))));
        assert!(!region_contains(&dc, from_lightcone(LightConePoint::new(2.0, -0.5))));
        assert!(Region::double_cone(Interval::new(-1.0, 0.5), Interval::new(0.3, 2.0)).is_err());
        assert!(Region::double_cone(Interval::new(-1.0, -0.5), Interval::new(-0.3, 2.0)).is_err());
        assert!(Region::double_cone(Interval::new(f64::NEG_INFINITY, -0.5), Interval::new(0.3, 2.0)).is_err());
    }

    #[test]
    fn flow_examples() {
        let q = LightConePoint::new(0.7, -1.3);
        assert_eq!(boost_flow(0.0, q), q);
        assert_eq!(dilation_flow(0.0, q), q);
        let origin = LightConePoint::new(0.0, 0.0);
        assert_eq!(boost_flow(0.37, origin), origin);
        assert_eq!(dilation_flow(-1.2, origin), origin);

        let b = boost_flow(1.0, LightConePoint::new(1.0, 1.0));
        assert!((b.xp - (-2.0 * PI).exp()).abs() < 1e-18);
        assert!(((b.xm - (2.0 * PI).exp()) / b.xm).abs() < 1e-15);

        let d = dilation_flow(0.5, LightConePoint::new(1.0, 2.0));
        assert!((d.xp - (-PI).exp()).abs() < 1e-16);
        assert!((d.xm - 2.0 * (-PI).exp()).abs() < 1e-16);
    }

    #[test]
    fn conformal_examples() {
        for s in [-2.0, 0.3, 1.0, 4.0] {
            let near_edge = conformal_dc_flow(s, 1.0 - 1e-12).unwrap();
            assert!((near_edge - 1.0).abs() < 1e-10);
            // x = 0 lands on tanh(s / 2)
            let v = conformal_dc_flow(s, 0.0).unwrap();
            assert!((v - (s / 2.0).tanh()).abs() < 1e-15, "{s}");
        }
        for x in [-0.9, -0.1, 0.0, 0.5, 0.99] {
            assert_eq!(conformal_dc_flow(0.0, x).unwrap(), x);
        }
        assert!(conformal_dc_flow(0.5, 1.0).unwrap_err().is_domain());
        assert!(conformal_dc_flow(0.5, -1.5).is_err());
        assert!(conformal_dc_flow(0.5, f64::NAN).is_err());
    }

    #[test]
    fn boost_preserves_interval() {
        for k in 0..50 {
            let q = LightConePoint::new(0.1 + k as f64 * 0.07, -0.3 - k as f64 * 0.05);
            for t in [-0.8, -0.1, 0.25, 0.9] {
                let b = boost_flow(t, q);
                assert!(crate::rel_diff(b.xp * b.xm, q.xp * q.xm) < 1e-12);
            }
        }
    }
}
