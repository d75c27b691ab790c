use modflow_core::byflow::{admissible_minus, admissible_plus, flow_region, nu_minus, nu_plus, FlowKind, FlowSpec};
use modflow_core::bygen::{delta0_axis, delta_n, eta_n, Bump, BumpShape, GeneratorSpec};
use modflow_core::lcgeom::{
    boost_flow, conformal_dc_flow, dilation_flow, from_lightcone, to_lightcone, HalfLineAxis, LightConePoint, Region,
    SpacetimePoint,
};
use modflow_core::specfun::{apply_multiplier, forward_ft, FourierMultiplier, Grid1D, SampledFunction};
use modflow_core::symcheck::{check_symbol_estimate, CheckOptions, SymbolClaim};
use modflow_core::{Complex64, Interval};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nu_plus_group_law(s in -1.0f64..1.0, t in -1.0f64..1.0, x in -1.0f64..3.0, beta in 0.5f64..4.0) {
        prop_assume!(admissible_plus(t, x, beta));
        let mid = nu_plus(t, x, beta).unwrap();
        prop_assume!(admissible_plus(s, mid, beta) && admissible_plus(s + t, x, beta));
        let a = nu_plus(s, mid, beta).unwrap();
        let b = nu_plus(s + t, x, beta).unwrap();
        prop_assert!(close(a, b, 1e-12), "{a} {b}");
    }

    #[test]
    fn nu_minus_group_law(s in -1.0f64..1.0, t in -1.0f64..1.0, x in -3.0f64..1.0, beta in 0.5f64..4.0) {
        prop_assume!(admissible_minus(t, x, beta));
        let mid = nu_minus(t, x, beta).unwrap();
        prop_assume!(admissible_minus(s, mid, beta) && admissible_minus(s + t, x, beta));
        let a = nu_minus(s, mid, beta).unwrap();
        let b = nu_minus(s + t, x, beta).unwrap();
        prop_assert!(close(a, b, 1e-12), "{a} {b}");
    }

    #[test]
    fn thermal_wedge_group_law(s in -0.5f64..0.5, t in -0.5f64..0.5, xp in 0.01f64..3.0, xm in -3.0f64..-0.01) {
        let spec = FlowSpec::thermal(1.5, Region::RightWedge).unwrap();
        let q = LightConePoint::new(xp, xm);
        let a = flow_region(&spec, s, flow_region(&spec, t, q).unwrap()).unwrap();
        let b = flow_region(&spec, s + t, q).unwrap();
        prop_assert!(close(a.xp, b.xp, 1e-12) && close(a.xm, b.xm, 1e-12));
    }

    #[test]
    fn nu_plus_increasing_and_positive(t in -1.0f64..1.0, x in 1e-3f64..5.0, dx in 1e-3f64..1.0, beta in 0.5f64..4.0) {
        let a = nu_plus(t, x, beta).unwrap();
        let b = nu_plus(t, x + dx, beta).unwrap();
        prop_assert!(a > 0.0 && b > a);
    }

    #[test]
    fn nu_plus_dilation_limit(t in -1.0f64..1.0, x in -1.0f64..1.0) {
        // leading correction to the dilation is (pi x^2 / beta)(e^s - e^2s), s = -2 pi t
        let beta = 1e6;
        let e = (-2.0 * std::f64::consts::PI * t).exp();
        let v = nu_plus(t, x, beta).unwrap();
        let predicted = std::f64::consts::PI * x * x / beta * (e - e * e);
        prop_assert!((v - e * x - predicted).abs() <= 1e-2 * predicted.abs() + 1e-9);
        if t > -0.25 {
            prop_assert!((v - e * x).abs() <= 1e-4);
        }
    }

    #[test]
    fn geometric_group_laws(s in -2.0f64..2.0, t in -2.0f64..2.0, xp in -3.0f64..3.0, xm in -3.0f64..3.0) {
        let q = LightConePoint::new(xp, xm);
        for f in [boost_flow, dilation_flow] {
            let a = f(s, f(t, q));
            let b = f(s + t, q);
            prop_assert!(close(a.xp, b.xp, 1e-12) && close(a.xm, b.xm, 1e-12));
        }
        let d = boost_flow(t, q);
        prop_assert!(close(d.xp * d.xm, xp * xm, 1e-12));
    }

    #[test]
    fn conformal_group_law_and_invariance(s in -5.0f64..5.0, t in -5.0f64..5.0, x in -0.999f64..0.999) {
        let mid = conformal_dc_flow(t, x).unwrap();
        prop_assert!(mid > -1.0 && mid < 1.0);
        let a = conformal_dc_flow(s, mid).unwrap();
        let b = conformal_dc_flow(s + t, x).unwrap();
        // values live in (-1, 1), so a unit floor on the scale is natural
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} {b}");
    }

    #[test]
    fn lightcone_roundtrip_dyadic(a in -1024i32..1024, b in -1024i32..1024) {
        let p = SpacetimePoint::new(a as f64 / 64.0, b as f64 / 32.0);
        prop_assert_eq!(from_lightcone(to_lightcone(p)), p);
    }

    #[test]
    fn parseval(seed in proptest::collection::vec(-1.0f64..1.0, 8)) {
        let grid = Grid1D::new(-8.0, 8.0, 256).unwrap();
        let f = SampledFunction::from_fn(grid, None, |x| {
            let env = (-x * x / 2.0).exp();
            Complex64::new(seed[0] + seed[1] * x + seed[2] * (seed[3] * x).sin(), seed[4] + seed[5] * x * x) * env
                + Complex64::new(seed[6], seed[7]) * (-(x - 2.0).powi(2)).exp()
        }).unwrap();
        let spec = forward_ft(&f);
        let lhs = f.l2_norm();
        let rhs = spec.l2_norm();
        prop_assert!(close(lhs, rhs, 1e-12), "{lhs} {rhs}");
    }

    #[test]
    fn multiplier_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0) {
        let grid = Grid1D::new(-8.0, 8.0, 256).unwrap();
        let f = SampledFunction::from_real_fn(grid, None, |x| (-x * x).exp()).unwrap();
        let g = SampledFunction::from_real_fn(grid, None, |x| x * (-(x - 1.0).powi(2)).exp()).unwrap();
        let m = FourierMultiplier::new(|xi: f64| Complex64::new(0.0, xi) / Complex64::new(c.abs() + 1.0, xi), 0.0);
        let (ca, cb) = (Complex64::new(a, 0.3), Complex64::new(b, -c));
        let lhs = apply_multiplier(&f.combine(ca, &g, cb).unwrap(), &m).unwrap();
        let rhs = apply_multiplier(&f, &m).unwrap().combine(ca, &apply_multiplier(&g, &m).unwrap(), cb).unwrap();
        prop_assert!(lhs.l2_distance(&rhs).unwrap() <= 1e-12 * (1.0 + rhs.l2_norm()));
    }

    #[test]
    fn claim_monotone_in_order(k in 0i32..3, m in 0.0f64..3.0, extra in 0.0f64..2.0) {
        let p = move |_: f64, xi: f64| Complex64::new(xi.powi(k), 0.0);
        let w = Interval::new(0.0, 1.0);
        let opts = CheckOptions { xi_max: 1e3, ..CheckOptions::default() };
        let lo = check_symbol_estimate(&p, &SymbolClaim::standard(m, w), &opts).unwrap();
        let hi = check_symbol_estimate(&p, &SymbolClaim::standard(m + extra, w), &opts).unwrap();
        prop_assert!(!lo.pass || hi.pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eta_zero_semigroup(s in -0.3f64..0.3, t in -0.3f64..0.3, beta in 0.5f64..2.0) {
        let grid = Grid1D::new(-0.5, 7.5, 2048).unwrap();
        let f = Bump::new(BumpShape::Gaussian, 2.5, 0.3).sample(grid).unwrap();
        let spec = GeneratorSpec::new(HalfLineAxis::Plus, 0, beta).unwrap();
        let a = eta_n(s, &eta_n(t, &f, &spec).unwrap(), &spec).unwrap();
        let b = eta_n(s + t, &f, &spec).unwrap();
        prop_assert!(a.l2_distance(&b).unwrap() <= 1e-8 * f.l2_norm());
    }

    #[test]
    fn delta_zero_is_principal_term(center in 2.0f64..4.0, width in 0.1f64..0.2, beta in 0.5f64..4.0) {
        let grid = Grid1D::new(-0.5, 7.5, 1024).unwrap();
        let f = Bump::new(BumpShape::Gaussian, center, width).sample(grid).unwrap();
        let spec = GeneratorSpec::new(HalfLineAxis::Plus, 0, beta).unwrap();
        prop_assert_eq!(delta_n(&f, &spec).unwrap(), delta0_axis(&f, &spec).unwrap());
    }
}

#[test]
fn boost_region_is_wedge_limit() {
    let spec = FlowSpec::thermal(1e6, Region::RightWedge).unwrap();
    let boost = FlowSpec::geometric(FlowKind::Boost, Region::RightWedge);
    let mut worst: f64 = 0.0;
    for i in 1..20 {
        for j in 1..20 {
            let q = LightConePoint::new(i as f64 / 20.0, -(j as f64) / 20.0);
            for t in [-0.25, -0.1, 0.1, 0.25] {
                let a = flow_region(&spec, t, q).unwrap();
                let b = flow_region(&boost, t, q).unwrap();
                worst = worst.max((a.xp - b.xp).abs()).max((a.xm - b.xm).abs());
            }
        }
    }
    assert!(worst < 1e-4, "{worst}");
}
