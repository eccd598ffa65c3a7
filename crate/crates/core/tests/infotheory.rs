mod common;

use std::f64::consts::{LN_2, PI};

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use satsec_core::infotheory::*;
use satsec_core::numeric::QuadConfig;

use common::{h2, mi_oracle};

/// Frozen after Gauss-Hermite and Monte-Carlo agreement (see below).
const MI_A1_NB1: f64 = 0.721_451_590_790_387_1;
const MI_A05_NB1: f64 = 0.290_480_113_360_848_06;
const CS_05_NB1: f64 = 0.430_971_477_429_539_84;

fn monte_carlo_mi(a: f64, var: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = var.sqrt();
    let (mut sum, mut sum2) = (0.0, 0.0);
    for _ in 0..samples {
        let n: f64 = StandardNormal.sample(&mut rng);
        let y = a + sd * n;
        let v = (-2.0 * a * y / var).exp().ln_1p() / LN_2;
        let v = if v.is_finite() { v } else { -2.0 * a * y / var / LN_2 };
        sum += v;
        sum2 += v * v;
    }
    let mean = sum / samples as f64;
    let var_hat = (sum2 / samples as f64 - mean * mean).max(0.0);
    (1.0 - mean, (var_hat / samples as f64).sqrt())
}

#[test]
fn gauss_hermite_and_monte_carlo_agree_with_frozen_value() {
    let gh = mi_oracle(1.0, 0.5);
    let (mc, se) = monte_carlo_mi(1.0, 0.5, 10_000_000, 7);
    assert!((gh - mc).abs() < 3.0 * se, "GH {gh} vs MC {mc} +- {se}");
    assert_abs_diff_eq!(gh, MI_A1_NB1, epsilon = 1e-12);
    let got = bpsk_mi(&BpskAwgn::new(1.0, 1.0).unwrap()).unwrap();
    assert_abs_diff_eq!(got, MI_A1_NB1, epsilon = 1e-10);
}

#[test]
fn half_amplitude_value_and_capacity() {
    assert_abs_diff_eq!(mi_oracle(0.5, 0.5), MI_A05_NB1, epsilon = 1e-12);
    assert_abs_diff_eq!(bpsk_mi(&BpskAwgn::new(0.5, 1.0).unwrap()).unwrap(), MI_A05_NB1, epsilon = 1e-10);
    assert_abs_diff_eq!(secrecy_capacity(0.5, 1.0).unwrap(), CS_05_NB1, epsilon = 1e-10);
}

/// `int c u(S(y)) dy` with `S = exp(-(y+a)^2/n_B) + exp(-(y-a)^2/n_B)`,
/// `u(x) = -x ln x`, by composite Simpson on a fixed fine grid.
fn u_form(a: f64, n_b: f64, c: f64) -> f64 {
    let half = a + 12.0 * (0.5 * n_b).sqrt();
    let m = 200_000;
    let h = 2.0 * half / m as f64;
    let f = |y: f64| {
        let s = (-(y + a).powi(2) / n_b).exp() + (-(y - a).powi(2) / n_b).exp();
        if s > 0.0 { -c * s * s.ln() } else { 0.0 }
    };
    let mut acc = f(-half) + f(half);
    for i in 1..m {
        acc += f(-half + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn capacity_matches_entropy_difference_form() {
    for &(g, n_b) in &[(0.5, 1.0), (0.3, 0.5), (0.9, 2.0)] {
        let c = 1.0 / (4.0 * PI * n_b).sqrt();
        let nats = u_form(1.0, n_b, c) - u_form(g, n_b, c);
        assert_abs_diff_eq!(secrecy_capacity(g, n_b).unwrap() * LN_2, nats, epsilon = 1e-9);
    }
}

#[test]
fn monotone_in_amplitude_and_noise() {
    let amps: Vec<f64> = (0..=12).map(|i| i as f64 * 0.25).collect();
    for n_b in [0.1, 1.0, 10.0] {
        let v: Vec<f64> = amps.iter().map(|&a| bpsk_mi(&BpskAwgn::new(a, n_b).unwrap()).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0] || w[1] > 1.0 - 1e-12), "n_b={n_b}: {v:?}");
    }
    for a in [0.3, 1.0] {
        let v: Vec<f64> = (0..12).map(|i| bpsk_mi(&BpskAwgn::new(a, 0.05 * 1.6f64.powi(i)).unwrap()).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] < w[0]), "a={a}: {v:?}");
    }
}

#[test]
fn degradation_equivalence() {
    for n_b in [0.1, 1.0, 10.0] {
        for g in [0.05, 0.3, 0.5, 0.9, 0.99] {
            assert!(secrecy_capacity(g, n_b).unwrap() > 0.0, "g={g} n_b={n_b}");
        }
        for g in [1.0, 1.05, 1.2] {
            assert_eq!(secrecy_capacity(g, n_b).unwrap(), 0.0);
        }
    }
}

#[test]
fn zero_gamma_column_is_bpsk_capacity() {
    let snrs: Vec<f64> = (0..7).map(|i| -10.0 + 5.0 * i as f64).collect();
    let cells = capacity_surface(&[0.0], &snrs).unwrap();
    for c in cells {
        assert_abs_diff_eq!(c.cs_bits, common::mi_oracle_simpson(1.0, 0.5 * snr_db_to_n_b(c.snr_db)), epsilon = 1e-10);
    }
}

#[test]
fn surface_rows_non_increasing_in_gamma() {
    let gammas: Vec<f64> = (0..=12).map(|i| i as f64 / 10.0).collect();
    let snrs = [-10.0, 0.0, 10.0, 20.0];
    let cells = capacity_surface(&gammas, &snrs).unwrap();
    for (j, _) in snrs.iter().enumerate() {
        let col: Vec<f64> = (0..gammas.len()).map(|i| cells[i * snrs.len() + j].cs_bits).collect();
        assert!(col.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{col:?}");
        assert!(col[10..].iter().all(|&v| v == 0.0));
    }
}

#[test]
fn snr_conversion_round_trip() {
    assert_eq!(snr_db_to_n_b(0.0), 1.0);
    assert_abs_diff_eq!(snr_db_to_n_b(10.0), 0.1, epsilon = 1e-15);
    assert_abs_diff_eq!(n_b_to_snr_db(snr_db_to_n_b(7.3)), 7.3, epsilon = 1e-12);
}

#[test]
fn per_dimension_convention_doubles_variance() {
    let a = BpskAwgn::with_convention(0.5, 2.0, NoiseConvention::RealPartOfComplex).unwrap();
    let b = BpskAwgn::with_convention(0.5, 1.0, NoiseConvention::PerDimension).unwrap();
    assert_eq!(bpsk_mi(&a).unwrap(), bpsk_mi(&b).unwrap());
}

#[test]
fn density_integrates_to_one() {
    let ch = BpskAwgn::new(0.7, 1.3).unwrap();
    let r = satsec_core::numeric::integrate(|y| ch.log_density(y, 1.0).exp(), &ch.breakpoints(), QuadConfig::default()).unwrap();
    assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-13);
}

#[test]
fn halving_tolerance_stays_within_reported_error() {
    for &(a, n_b) in &[(1.0, 1.0), (0.3, 0.2), (2.0, 5.0)] {
        let ch = BpskAwgn::new(a, n_b).unwrap();
        let coarse = bpsk_mi_detailed(&ch, QuadConfig { abs_tol: 1e-9, rel_tol: 1e-9, ..QuadConfig::default() }).unwrap();
        let fine = bpsk_mi_detailed(&ch, QuadConfig { abs_tol: 5e-10, rel_tol: 5e-10, ..QuadConfig::default() }).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error.max(1e-15), "{coarse:?} {fine:?}");
        assert!(coarse.error <= 1e-8);
    }
}

#[test]
fn bsc_mutual_information() {
    let v = discrete_mi(&DiscreteChannel::bsc(0.11).unwrap(), &[0.5, 0.5]).unwrap();
    assert_abs_diff_eq!(v, 1.0 - h2(0.11), epsilon = 1e-14);
    assert!((v - 0.5002).abs() < 5e-4);
}

#[test]
fn uniform_input_beats_perturbations_on_hard_decision_surrogate() {
    let bsc = satsec_core::codec::hard_decision_bsc(0.5, 1.0).unwrap();
    let best = discrete_mi(&bsc, &[0.5, 0.5]).unwrap();
    for q in [0.3, 0.49, 0.8] {
        assert!(discrete_mi(&bsc, &[q, 1.0 - q]).unwrap() < best);
    }
}

proptest! {
    #[test]
    fn mutual_information_is_a_bit_fraction(a in 0.0f64..4.0, n_b in 0.01f64..20.0) {
        let v = bpsk_mi(&BpskAwgn::new(a, n_b).unwrap()).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn capacity_never_negative(g in 0.0f64..1.2, snr in -10.0f64..20.0) {
        prop_assert!(secrecy_capacity(g, snr_db_to_n_b(snr)).unwrap() >= 0.0);
    }

    #[test]
    fn discrete_mi_bounded_by_input_entropy(p in 0.0f64..0.5, q in 0.01f64..0.99) {
        let v = discrete_mi(&DiscreteChannel::bsc(p).unwrap(), &[q, 1.0 - q]).unwrap();
        prop_assert!(v >= 0.0 && v <= h2(q) + 1e-12);
    }
}
