use curved_dirac::geometry::PHASE_QUADRATURE_TOL;
use curved_dirac::{SurfaceKind, SurfaceSpec};
use curved_dirac_oracles as oracle;
use proptest::prelude::*;

fn slopes(spec: &SurfaceSpec, r: f64) -> (f64, f64) {
    match spec.kind() {
        SurfaceKind::Gaussian => oracle::gaussian_slopes(spec.amplitude(), spec.width(), r),
        SurfaceKind::Volcano => oracle::volcano_slopes(spec.amplitude(), spec.width(), r),
        SurfaceKind::Flat => (0.0, 0.0),
    }
}

fn surfaces() -> Vec<SurfaceSpec> {
    vec![
        SurfaceSpec::gaussian(1.0, 1.0).unwrap(),
        SurfaceSpec::gaussian(1.3, 1.0).unwrap(),
        SurfaceSpec::gaussian(0.4, 2.5).unwrap(),
        SurfaceSpec::volcano(1.3, 2.0).unwrap(),
        SurfaceSpec::volcano(1.0, 1.0).unwrap(),
    ]
}

#[test]
fn deformation_is_the_squared_slope() {
    for spec in surfaces() {
        for i in 1..200 {
            let r = i as f64 * 0.025;
            let (f, _) = spec.metric_deformation(r);
            let (d1, _) = slopes(&spec, r);
            assert!((spec.alpha() * f - d1 * d1).abs() < 1e-14 * (1.0 + d1 * d1));
        }
    }
}

#[test]
fn christoffels_match_finite_differences_of_the_metric() {
    for spec in surfaces() {
        let metric = |r: f64| 1.0 + slopes(&spec, r).0.powi(2);
        for i in 1..100 {
            let r = i as f64 * 0.05;
            let got = spec.christoffel_symbols(r).unwrap();
            let want = oracle::christoffels_from_metric(metric, r, 1e-5);
            assert!((got.r_rr - want[0]).abs() < 1e-8, "Γ^r_rr at {r}");
            assert!((got.r_thth - want[1]).abs() < 1e-12);
            assert!((got.th_rth - want[2]).abs() < 1e-12);
        }
    }
}

#[test]
fn curvature_matches_ricci_scalar_from_christoffels() {
    for spec in surfaces() {
        let gamma = |r: f64| {
            let c = spec.christoffel_symbols(r).unwrap();
            [c.r_rr, c.r_thth, c.th_rth]
        };
        for i in 1..100 {
            let r = 0.02 + i as f64 * 0.049;
            let g_rr = 1.0 + spec.alpha() * spec.metric_deformation(r).0;
            // 1/r terms need a step relative to r
            let want = oracle::ricci_scalar_from_christoffels(gamma, g_rr, r, 1e-3 * r);
            let got = spec.curvature_scalar(r).unwrap();
            assert!((got - want).abs() < 1e-6, "{:?} r = {r}: {got} vs {want}", spec.kind());
        }
    }
}

#[test]
fn curvature_is_minus_twice_the_embedding_curvature() {
    for spec in surfaces() {
        for i in 1..500 {
            let r = i as f64 * 0.01;
            let got = spec.curvature_scalar(r).unwrap();
            let k = oracle::embedding_curvature(slopes(&spec, r), r);
            if got.abs() > 1e-6 {
                assert!((got / (-2.0 * k) - 1.0).abs() < 1e-9, "r = {r}: {got} vs {}", -2.0 * k);
            }
        }
    }
}

#[test]
fn geometric_phase_matches_high_order_quadrature() {
    let spec = SurfaceSpec::gaussian(1.3, 1.0).unwrap();
    let integrand = |s: f64| (1.0 - spec.fermi_factor(s)) / (2.0 * s);
    for r in [0.3, 1.0, 2.5, 5.0] {
        let want = (-oracle::integrate(integrand, 0.0, r, 64)).exp();
        let got = spec.geometric_phase(r, 0.0).unwrap();
        assert!((got - want).abs() < 10.0 * PHASE_QUADRATURE_TOL, "r = {r}");
    }
    let volcano = SurfaceSpec::volcano(1.3, 2.0).unwrap();
    let integrand = |s: f64| (1.0 - volcano.fermi_factor(s)) / (2.0 * s);
    let want = (-oracle::integrate(integrand, 0.01, 3.0, 256)).exp();
    assert!((volcano.geometric_phase(3.0, 0.01).unwrap() - want).abs() < 10.0 * PHASE_QUADRATURE_TOL);
}

#[test]
fn phase_profile_is_cumulative() {
    let spec = SurfaceSpec::volcano(1.3, 2.0).unwrap();
    let radii: Vec<f64> = (1..=50).map(|i| 0.01 + i as f64 * 0.1).collect();
    let profile = spec.geometric_phase_profile(&radii, 0.01).unwrap();
    for (r, mu) in radii.iter().zip(&profile).step_by(7) {
        assert!((spec.geometric_phase(*r, 0.01).unwrap() - mu).abs() < 1e-9);
    }
    assert!(spec.geometric_phase_profile(&[1.0, 0.5], 0.01).is_err());
}

#[test]
fn flat_surface_is_trivial() {
    let flat = SurfaceSpec::flat();
    for r in [0.0, 0.3, 4.0] {
        assert_eq!(flat.fermi_factor(r), 1.0);
        assert_eq!(flat.pseudo_gauge(r).unwrap(), 0.0);
        assert_eq!(flat.curvature_scalar(r).unwrap(), 0.0);
        assert_eq!(flat.geometric_phase(r, 0.0).unwrap(), 1.0);
    }
}

fn any_surface() -> impl Strategy<Value = SurfaceSpec> {
    (0.05f64..3.0, 0.3f64..3.0, prop::bool::ANY).prop_map(|(a, b, gaussian)| {
        if gaussian {
            SurfaceSpec::gaussian(a, b).unwrap()
        } else {
            SurfaceSpec::volcano(a, b).unwrap()
        }
    })
}

proptest! {
    #[test]
    fn fermi_factor_in_unit_interval(spec in any_surface(), r in 1e-4f64..10.0) {
        let f = spec.fermi_factor(r);
        prop_assert!(f > 0.0 && f <= 1.0);
    }

    #[test]
    fn pseudo_gauge_is_non_negative_and_consistent(spec in any_surface(), r in 1e-3f64..10.0) {
        let a = spec.pseudo_gauge(r).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - (1.0 - spec.fermi_factor(r)) / (2.0 * r)).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn pseudo_gauge_derivative_matches_difference(spec in any_surface(), r in 0.05f64..6.0) {
        let h = 1e-5;
        let fd = (spec.pseudo_gauge(r + h).unwrap() - spec.pseudo_gauge(r - h).unwrap()) / (2.0 * h);
        let exact = spec.pseudo_gauge_derivative(r).unwrap();
        prop_assert!((fd - exact).abs() < 1e-5 * (1.0 + exact.abs()), "{} vs {}", fd, exact);
    }

    #[test]
    fn fermi_derivative_matches_difference(spec in any_surface(), r in 0.01f64..6.0) {
        let h = 1e-6;
        let fd = (spec.fermi_factor(r + h) - spec.fermi_factor(r - h)) / (2.0 * h);
        prop_assert!((fd - spec.fermi_factor_derivative(r)).abs() < 1e-6);
    }

    #[test]
    fn phase_is_decreasing_and_bounded(spec in any_surface(), r1 in 0.05f64..3.0, dr in 0.0f64..2.0) {
        let lower = 0.01;
        let a = spec.geometric_phase(r1, lower).unwrap();
        let b = spec.geometric_phase(r1 + dr, lower).unwrap();
        prop_assert!(a > 0.0 && a <= 1.0);
        prop_assert!(b <= a + 1e-12);
    }
}
