use lomse_core::dynamics::{ConeProfile, FlatProfile, RadialGraph, DEFAULT_SEED_EPSILON, DEFAULT_T_MAX};
use lomse_core::geometry::{
    ball_volume, density_at, density_deficit, density_report, jordan_angles, jordan_cos_product, los_volume_ratio,
    normal_angle_cos, slope_function, sphere_area, volume_element_ratio, Verdict,
};
use lomse_core::{extract_profile, graph_volume, integrate_orbit, seed_unstable, validate_params, OrbitOptions, Profile};
use lomse_core::{LomseError, LomseParams};
use std::f64::consts::PI;

const SWEEP: [(i64, i64, i64); 8] =
    [(3, 2, 2), (3, 2, 4), (3, 2, 6), (5, 4, 2), (5, 4, 4), (5, 4, 6), (7, 4, 2), (15, 8, 2)];

fn profile(prm: &LomseParams) -> Profile {
    let o = integrate_orbit(prm, seed_unstable(prm, DEFAULT_SEED_EPSILON), DEFAULT_T_MAX, &OrbitOptions::default())
        .unwrap();
    extract_profile(&o, prm).unwrap()
}

#[test]
fn sphere_measures_match_gamma_formula() {
    // |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2), tabulated for small n
    let table = [
        (1, 2.0 * PI),
        (2, 4.0 * PI),
        (3, 2.0 * PI * PI),
        (4, 8.0 * PI * PI / 3.0),
        (5, PI.powi(3)),
        (6, 16.0 * PI.powi(3) / 15.0),
        (7, PI.powi(4) / 3.0),
    ];
    for (n, area) in table {
        assert!((sphere_area(n) - area).abs() < 1e-12 * area, "S^{n}");
        assert!((ball_volume(n + 1) - area / f64::from(n + 1)).abs() < 1e-12 * area);
    }
    assert!((ball_volume(16) - PI.powi(8) / 40320.0).abs() < 1e-12);
}

#[test]
fn cos_alpha_equals_jordan_product() {
    for (n, p, k) in SWEEP {
        let prm = validate_params(n, p, k).unwrap();
        let angles = jordan_angles(&prm);
        let mult: u32 = angles.iter().map(|j| j.multiplicity).sum();
        assert_eq!(mult, prm.n() + 1);
        let prod = jordan_cos_product(&angles);
        assert!((prod - normal_angle_cos(&prm)).abs() < 1e-12, "({n},{p},{k})");
        assert!((slope_function(&prm) * prod - 1.0).abs() < 1e-12);
    }
}

#[test]
fn volume_ratio_from_volume_element() {
    for (n, p, k) in SWEEP {
        let prm = validate_params(n, p, k).unwrap();
        let lambda_sq = prm.lambda() * prm.lambda();
        let v = volume_element_ratio(prm.n(), prm.p(), lambda_sq, prm.theta());
        assert!((v - los_volume_ratio(&prm)).abs() < 1e-12 * v, "({n},{p},{k})");
        assert!(v > 1.0);
    }
}

#[test]
fn isometric_limit_has_unit_ratio() {
    for theta in [0.1, 0.7, 1.3] {
        for n in [3, 5, 15] {
            assert!((volume_element_ratio(n, n, 1.0, theta) - 1.0).abs() < 1e-14);
        }
    }
    assert_eq!(volume_element_ratio(5, 4, 7.0, 0.0), 1.0);
}

#[test]
fn flat_and_cone_reference_densities() {
    for (n, p, k) in [(3, 2, 2), (5, 4, 6), (15, 8, 2)] {
        let prm = validate_params(n, p, k).unwrap();
        for d in [0.3, 1.0, 20.0] {
            assert!((density_at(&FlatProfile, &prm, d).unwrap() - 1.0).abs() < 1e-9);
            let cone = ConeProfile { slope: prm.phi0() };
            let theta = density_at(&cone, &prm, d).unwrap();
            assert!((theta - los_volume_ratio(&prm)).abs() < 1e-9 * theta, "({n},{p},{k}) d = {d}");
        }
    }
}

#[test]
fn graph_volume_scales_like_a_cone() {
    let prm = validate_params(3, 2, 4).unwrap();
    let cone = ConeProfile { slope: prm.phi0() };
    let v1 = graph_volume(&cone, &prm, 1.0).unwrap();
    let v3 = graph_volume(&cone, &prm, 3.0).unwrap();
    assert!((v3 / v1 - 81.0).abs() < 1e-8);
}

#[test]
fn densities_are_monotone_on_fifty_radii() {
    for (n, p, k) in SWEEP {
        let prm = validate_params(n, p, k).unwrap();
        let prof = profile(&prm);
        let hi = (prof.max_log_radius() - 1.0).exp();
        let radii: Vec<f64> = (0..50).map(|i| 0.05 * (hi / 0.05f64).powf(i as f64 / 49.0)).collect();
        let rep = density_report(&prof, &prm, &radii).unwrap();
        assert!(rep.monotone, "({n},{p},{k}) {:?}", rep.theta_seq);
        assert!(rep.bounded_by_cone, "({n},{p},{k})");
        assert!(rep.theta_seq[0] >= 1.0 - 1e-6);
        assert!((rep.theta_cone_quadrature - rep.theta_cone).abs() < 1e-6);
    }
}

#[test]
fn deficit_identity_matches_direct_difference() {
    let prm = validate_params(3, 2, 4).unwrap();
    let prof = profile(&prm);
    let theta0 = los_volume_ratio(&prm);
    for d in [1e3, 5e3, 4e4] {
        let direct = theta0 - density_at(&prof, &prm, d).unwrap();
        let deficit = density_deficit(&prof, &prm, d).unwrap();
        assert!(deficit.value > 0.0);
        assert!((direct - deficit.value).abs() < 1e-8, "d = {d}: {direct} vs {}", deficit.value);
    }
}

#[test]
fn spiral_verdicts() {
    for (n, p, k) in [(3, 2, 4), (3, 2, 6), (5, 4, 6)] {
        let prm = validate_params(n, p, k).unwrap();
        let prof = profile(&prm);
        let o = prof.orbit().clone();
        let rep = lomse_core::nonminimizing_verdict(&prof, &o, &prm).unwrap();
        assert_eq!(rep.verdict, Verdict::NonMinimizing, "({n},{p},{k})");
        assert!(rep.deficit_seq[0] > 0.0);
    }
}

#[test]
fn density_rejects_bad_radii() {
    let prm = validate_params(3, 2, 2).unwrap();
    assert!(density_report(&FlatProfile, &prm, &[]).is_err());
    let prof = profile(&prm);
    let far = 10.0 * prof.max_log_radius().exp();
    assert!(matches!(density_at(&prof, &prm, far), Err(LomseError::DomainTooShort { .. })));
}
