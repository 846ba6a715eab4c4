mod common;

use common::{families, random_body, rel, rng, segment_integral};
use proptest::prelude::*;
use pseudocone::geometry::{orthant, ConeSpec, PseudoCone};
use pseudocone::linalg::vector;
use pseudocone::measures::{
    evaluate, weighted_cone_volume_radial, weighted_cone_volumes, weighted_covolume, weighted_surface_area_radial,
    weighted_surface_areas, Route,
};
use pseudocone::quadrature::{QuadratureSettings, WeightDensity};
use rand::Rng;
use std::f64::consts::FRAC_PI_8;

fn family(index: usize) -> ConeSpec {
    families().swap_remove(index % 3).1
}

fn density(cone: &ConeSpec, q_offset: f64) -> WeightDensity {
    WeightDensity::axis_power(cone.dim(), cone.dim() as f64 - 1.0 + q_offset, 0.5, cone.axis()).unwrap()
}

#[test]
fn unit_quadrant_body_has_closed_form_measures() {
    let c = orthant(2);
    let d = WeightDensity::constant(2, 1.5).unwrap();
    let k = PseudoCone::wulff(&c, &[-c.axis().clone()], &[1.0]).unwrap();
    let root2 = 2f64.sqrt();
    let a = segment_integral(&|y| d.eval(y), &vector(&[root2, 0.0]), &vector(&[0.0, root2]), 1e-14);
    let report = evaluate(&k, &d, &QuadratureSettings { tol: 1e-12, ..Default::default() }, &[Route::Radial]).unwrap();
    let f = &report.facets[0];
    assert!(rel(f.weighted_surface_area, a) < 1e-10);
    assert!(rel(f.weighted_cone_volume, 2.0 * a) < 1e-10);
    assert!(rel(f.surface_area, 2.0) < 1e-12);
    assert!(rel(f.cone_volume, 1.0) < 1e-12);
    assert!(f.radial.unwrap().delta.abs() < 1e-9);
}

#[test]
fn inactive_constraints_report_zeros() {
    let c = orthant(2);
    let d = WeightDensity::constant(2, 1.5).unwrap();
    let u = vector(&[-FRAC_PI_8.cos(), -FRAC_PI_8.sin()]);
    let k = PseudoCone::wulff(&c, &[-c.axis().clone(), u], &[1.0, 0.1]).unwrap();
    let report = evaluate(&k, &d, &QuadratureSettings::default(), &[Route::Radial, Route::Mc]).unwrap();
    let f = &report.facets[1];
    assert!(!f.active);
    assert_eq!((f.weighted_surface_area, f.weighted_cone_volume, f.surface_area, f.cone_volume), (0.0, 0.0, 0.0, 0.0));
    assert_eq!(f.mc.unwrap().value, 0.0);
    assert!(f.radial.unwrap().value.abs() < 1e-12);
    assert!(f.support > 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cone_volumes_add_up_to_the_covolume(seed in any::<u64>(), fam in 0usize..3, q in 0.1f64..0.9) {
        let cone = family(fam);
        let mut r = rng(seed);
        let m = r.random_range(1..6);
        let k = random_body(&cone, m, &mut r);
        let d = density(&cone, q);
        let parts = weighted_cone_volumes(&k, &d, 1e-11).unwrap();
        let total = weighted_covolume(&k, &d, 1e-11).unwrap();
        prop_assert!(parts.iter().all(|p| p.value.is_finite() && p.value > 0.0));
        prop_assert!(rel(parts.iter().map(|p| p.value).sum(), total.value) <= 1e-14);
        if cone.dim() == 2 {
            let settings = QuadratureSettings { tol: 1e-12, ..Default::default() };
            let all: Vec<usize> = (0..m).collect();
            let radial = weighted_cone_volume_radial(&k, &d, &all, &settings).unwrap();
            prop_assert!(rel(radial.value, total.value) <= 1e-8);
        }
    }

    #[test]
    fn cutting_deeper_does_not_decrease_the_covolume(seed in any::<u64>(), fam in 0usize..3, grow in 0.0f64..0.5) {
        let cone = family(fam);
        let mut r = rng(seed);
        let m = r.random_range(1..6);
        let k = random_body(&cone, m, &mut r);
        let d = density(&cone, 0.5);
        let i = r.random_range(0..m);
        let mut f = k.values().to_vec();
        f[i] *= 1.0 + grow;
        let deeper = PseudoCone::wulff(&cone, k.normals(), &f).unwrap();
        let a = weighted_covolume(&k, &d, 1e-11).unwrap().value;
        let b = weighted_covolume(&deeper, &d, 1e-11).unwrap().value;
        prop_assert!(b >= a * (1.0 - 1e-12));
    }

    #[test]
    fn planar_integral_transform_identity(seed in any::<u64>(), q in 0.1f64..0.9) {
        let cone = orthant(2);
        let mut r = rng(seed);
        let m = r.random_range(1..6);
        let k = random_body(&cone, m, &mut r);
        let d = density(&cone, q);
        let g: Vec<f64> = (0..m).map(|_| r.random_range(-1.0..1.0)).collect();
        let s = weighted_surface_areas(&k, &d, 1e-12).unwrap();
        let expected: f64 = g.iter().zip(&s).map(|(g, s)| g * s.value).sum();
        let settings = QuadratureSettings { tol: 1e-12, ..Default::default() };
        let value = weighted_surface_area_radial(&k, &d, &g, &settings).unwrap().value;
        let scale: f64 = g.iter().zip(&s).map(|(g, s)| (g * s.value).abs()).sum();
        prop_assert!((value - expected).abs() <= 1e-8 * scale);
    }
}

#[test]
fn spatial_routes_agree_within_three_standard_errors() {
    for (fam, seed) in [(1, 11), (2, 12)] {
        let cone = family(fam);
        let mut r = rng(seed);
        let k = random_body(&cone, 4, &mut r);
        let d = density(&cone, 0.5);
        let settings = QuadratureSettings { tol: 1e-11, samples: 1_000_000, seed };
        let report = evaluate(&k, &d, &settings, &[Route::Radial, Route::Mc]).unwrap();
        for f in &report.facets {
            for route in [f.radial.unwrap(), f.mc.unwrap()] {
                assert!(route.delta.abs() <= 3.0 * route.error_estimate, "{route:?}");
            }
        }
        let g = vec![1.0; 4];
        let s: f64 = weighted_surface_areas(&k, &d, 1e-11).unwrap().iter().map(|s| s.value).sum();
        let transform = weighted_surface_area_radial(&k, &d, &g, &settings).unwrap();
        assert!((transform.value - s).abs() <= 3.0 * transform.error_estimate);
    }
}

#[test]
fn report_serializes_at_twelve_digits() {
    let c = orthant(2);
    let d = WeightDensity::constant(2, 1.5).unwrap();
    let k = PseudoCone::wulff(&c, &[-c.axis().clone()], &[1.0 / 3.0]).unwrap();
    let report = evaluate(&k, &d, &QuadratureSettings::default(), &[]).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["facets"][0]["support"], serde_json::json!(0.333333333333));
    let normal: Vec<f64> = serde_json::from_value(json["facets"][0]["normal"].clone()).unwrap();
    let expected: Vec<f64> = (-c.axis().clone()).iter().map(|x| format!("{x:.11e}").parse().unwrap()).collect();
    assert_eq!(normal, expected);
}
