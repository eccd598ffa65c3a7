use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use satsec_core::geometry::*;
use satsec_core::numeric::bessel_j;
use satsec_core::scenario::presets;

/// `J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt`; the trapezoid rule is
/// spectrally accurate for this periodic integrand.
fn bessel_integral(n: u32, x: f64) -> f64 {
    let m = 4000;
    let h = PI / m as f64;
    let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
    let mut sum = 0.5 * (f(0.0) + f(PI));
    for i in 1..m {
        sum += f(i as f64 * h);
    }
    sum * h / PI
}

fn oracle_pattern(theta_3db: f64, theta: f64) -> f64 {
    let x = HALF_POWER_ARGUMENT / theta_3db.to_radians().sin() * theta.to_radians().sin();
    bessel_integral(1, x) / (2.0 * x) + 36.0 * bessel_integral(3, x) / (x * x * x)
}

#[test]
fn bessel_matches_integral_representation() {
    for n in 0..=5 {
        for &x in &[0.05, 0.5, 1.0, 2.0712, 5.0, 12.5, 30.0, 80.0] {
            let (a, b) = (bessel_j(n, x), bessel_integral(n, x));
            assert!((a - b).abs() < 1e-13, "J_{n}({x}): {a} vs {b}");
        }
    }
}

#[test]
fn pattern_matches_oracle() {
    for &bw in &[2.0, 5.0, 10.0] {
        for i in 1..=90 {
            let theta = i as f64;
            let got = antenna_amplitude(&AntennaPattern::bessel(bw).unwrap(), theta).unwrap();
            assert!((got - oracle_pattern(bw, theta)).abs() < 1e-12, "bw={bw} theta={theta}");
        }
    }
}

#[test]
fn half_power_at_beamwidth() {
    let p = AntennaPattern::bessel(5.0).unwrap();
    let power = antenna_amplitude(&p, 5.0).unwrap().powi(2);
    assert!((power - 0.5).abs() < 0.02 * 0.5);
    assert_relative_eq!(power, oracle_pattern(5.0, 5.0).powi(2), max_relative = 1e-12);
}

#[test]
fn boresight_normalised_and_bounded() {
    for &bw in &[1.0, 5.0, 10.0, 30.0] {
        let p = AntennaPattern::bessel(bw).unwrap();
        assert_eq!(antenna_amplitude(&p, 0.0).unwrap(), 1.0);
        for i in 0..=90_000 {
            let a = antenna_amplitude(&p, i as f64 * 1e-3).unwrap();
            assert!(a.abs() <= 1.0 + 1e-6, "bw={bw} theta={}", i as f64 * 1e-3);
        }
    }
}

#[test]
fn path_loss_examples() {
    let g = LinkGeometry::new(35786.0, 1200.0, 0.0, 2.0).unwrap();
    assert_relative_eq!(path_loss_ratio(&g), 35786.0 / 1200.0, max_relative = 1e-15);
    assert!((path_loss_ratio(&g) - 29.8217).abs() < 5e-5);
    let uav_low = LinkGeometry::new(15000.0, 1.0, 0.0, 3.0).unwrap();
    assert_eq!(path_loss_ratio(&uav_low), 15000.0);
}

#[test]
fn composed_coefficient() {
    let p = AntennaPattern::bessel(5.0).unwrap();
    let eve = EveSystem::from_db(-25.0, 0.0).unwrap();
    let g = LinkGeometry::new(15000.0, 5.0, 20.0, 2.0).unwrap();
    let expected = oracle_pattern(5.0, 20.0).abs() * 10f64.powf(-25.0 / 20.0) * (15000.0 / 5.0);
    assert_relative_eq!(channel_coefficient(&p, &eve, &g).unwrap(), expected, max_relative = 1e-11);
}

fn brute_force_threshold(p: &AntennaPattern, eve: &EveSystem, g: &LinkGeometry) -> Option<f64> {
    let mut last_bad = None;
    for i in 0..=90_000 {
        let theta = i as f64 * 1e-3;
        if regularized_coefficient(p, eve, g, theta).unwrap() >= 1.0 {
            last_bad = Some(theta);
        }
    }
    match last_bad {
        Some(t) if t >= 90.0 => None,
        Some(t) => Some(t),
        None => Some(0.0),
    }
}

#[test]
fn degradation_angle_agrees_with_fine_scan() {
    for sf in presets() {
        let sc = sf.resolve().unwrap();
        let got = degradation_angle(&sc.pattern, &sc.eve, &sc.geometry).unwrap();
        let brute = brute_force_threshold(&sc.pattern, &sc.eve, &sc.geometry);
        match (got, brute) {
            (Degradation::Never, None) => {}
            (Degradation::Beyond { theta_deg }, Some(b)) => {
                assert!((theta_deg - b).abs() < 0.1, "{}: {theta_deg} vs {b}", sc.name)
            }
            other => panic!("{}: {other:?}", sc.name),
        }
    }
}

#[test]
fn region_is_consistent() {
    for sf in presets() {
        let sc = sf.resolve().unwrap();
        let Degradation::Beyond { theta_deg } = degradation_angle(&sc.pattern, &sc.eve, &sc.geometry).unwrap() else {
            continue;
        };
        let mut theta = theta_deg + 1e-6;
        while theta <= 90.0 {
            let g0 = regularized_coefficient(&sc.pattern, &sc.eve, &sc.geometry, theta).unwrap();
            assert!(regularize(g0 * sc.eve.gamma_n.sqrt(), &sc.eve, 1.0).degraded(), "{} at {theta}", sc.name);
            theta += 0.01;
        }
        let below = regularized_coefficient(&sc.pattern, &sc.eve, &sc.geometry, theta_deg - 1e-6).unwrap();
        assert!(below >= 1.0 - 1e-6, "{}: {below}", sc.name);
    }
}

#[test]
fn main_lobe_crossing_just_below_threshold_is_not_degraded() {
    // rows whose threshold is set by the main lobe rather than a side lobe
    for name in ["geo-leo-bw5-mu0", "geo-meo-bw5-mu0", "geo-meo-bw10-mu0", "uav-high"] {
        let sc = satsec_core::scenario::preset_by_name(name).unwrap().resolve().unwrap();
        let t = degradation_angle(&sc.pattern, &sc.eve, &sc.geometry).unwrap().threshold().unwrap();
        let g0 = regularized_coefficient(&sc.pattern, &sc.eve, &sc.geometry, t - 0.1).unwrap();
        assert!(!WiretapChannel { gamma_g0: g0, n_b: 1.0 }.degraded(), "{name}");
    }
}

proptest! {
    #[test]
    fn farther_eve_never_less_degraded(
        theta in 0.0f64..90.0,
        rho_e in 1.0f64..40000.0,
        factor in 1.0f64..10.0,
        mu_db in -30.0f64..10.0,
        r in 2.0f64..4.0,
    ) {
        let p = AntennaPattern::bessel(5.0).unwrap();
        let eve = EveSystem::from_db(mu_db, 0.0).unwrap();
        let near = LinkGeometry::new(35786.0, rho_e, theta, r).unwrap();
        let far = near.with_rho_e(rho_e * factor);
        let g_near = channel_coefficient(&p, &eve, &near).unwrap();
        let g_far = channel_coefficient(&p, &eve, &far).unwrap();
        prop_assert!(g_far <= g_near);
        if g_near < 1.0 {
            prop_assert!(g_far < 1.0);
        }
    }

    #[test]
    fn free_space_is_scale_invariant(
        theta in 0.0f64..90.0,
        rho_b in 1.0f64..50000.0,
        rho_e in 1.0f64..50000.0,
        c in 0.01f64..100.0,
    ) {
        let p = AntennaPattern::bessel(10.0).unwrap();
        let eve = EveSystem::new(1.3, 2.0).unwrap();
        let g1 = channel_coefficient(&p, &eve, &LinkGeometry::new(rho_b, rho_e, theta, 2.0).unwrap()).unwrap();
        let g2 = channel_coefficient(&p, &eve, &LinkGeometry::new(c * rho_b, c * rho_e, theta, 2.0).unwrap()).unwrap();
        prop_assert!((g1 - g2).abs() <= 1e-12 * g1.abs().max(1e-300));
    }
}
