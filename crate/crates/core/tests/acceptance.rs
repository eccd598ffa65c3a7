//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satsec_core::codec::*;
use satsec_core::exponents::*;
use satsec_core::geometry::Degradation;
use satsec_core::gf2::BitVec;
use satsec_core::infotheory::*;
use satsec_core::linkdesign::*;
use satsec_core::scenario::*;

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn zero_line() -> Outcome {
    let mut worst = 0.0f64;
    for n_b in [0.1, 1.0, 10.0] {
        worst = worst.max(secrecy_capacity(1.0, n_b).unwrap().abs());
    }
    let positive: Vec<f64> = [0.3, 0.5, 0.9].iter().map(|&g| secrecy_capacity(g, 1.0).unwrap()).collect();
    let pass = worst <= 1e-9 && positive.iter().all(|&c| c > 0.0);
    outcome(pass, format!("max |C_s(1, n_B)| = {worst:e}; C_s(0.3/0.5/0.9, 1) = {positive:?}"))
}

fn surface_shape() -> Outcome {
    let gammas: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
    let snrs: Vec<f64> = (0..20).map(|i| -10.0 + 30.0 * i as f64 / 19.0).collect();
    let cells = capacity_surface(&gammas, &snrs).unwrap();
    let at = |gi: usize, si: usize| {
        cells
            .iter()
            .find(|c| c.gamma_g0 == gammas[gi] && c.snr_db == snrs[si])
            .expect("grid cell")
            .cs_bits
    };
    let (mut gamma_viol, mut snr_viol, mut worst) = (0, 0, 0.0f64);
    let mut example = String::new();
    for si in 0..snrs.len() {
        for gi in 1..gammas.len() {
            let d = at(gi, si) - at(gi - 1, si);
            if d > 1e-9 {
                gamma_viol += 1;
                worst = worst.max(d);
            }
        }
    }
    for (gi, &gamma) in gammas.iter().enumerate() {
        if gamma >= 1.0 {
            continue;
        }
        for si in 1..snrs.len() {
            let d = at(gi, si - 1) - at(gi, si);
            if d > 1e-9 {
                if snr_viol == 0 {
                    example = format!(
                        "; first SNR violation at gamma={:.3}: {:.2} dB -> {:.2} dB drops by {d:.3e}",
                        gamma,
                        snrs[si - 1],
                        snrs[si]
                    );
                }
                snr_viol += 1;
                worst = worst.max(d);
            }
        }
    }
    outcome(
        gamma_viol == 0 && snr_viol == 0,
        format!("gamma violations {gamma_viol}, SNR violations {snr_viol}, worst {worst:e}{example}"),
    )
}

fn finite_length() -> Outcome {
    let ch = BpskAwgn::new(0.5, 1.0).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for frame in [Frame::Short, Frame::Medium] {
        let lb = sacrifice_exponent(0.18, frame.n(), &ch, ExponentMode::Tightest).unwrap();
        pass &= lb.bound < 1e-5;
        parts.push(format!("n={}: E={:.6e} bits, bound={:e}, s*={:.4}", frame.n(), lb.exponent, lb.bound, lb.s_star));
    }
    let mi = bpsk_mi(&ch).unwrap();
    parts.push(format!("I(X;Z)={mi:.4} bits exceeds rho_sac"));
    outcome(pass, parts.join("; "))
}

fn region_angles() -> Outcome {
    let scenarios: Vec<Scenario> = reference_presets().iter().map(|p| p.resolve().unwrap()).collect();
    let rows = run_region_study(&scenarios).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for r in &rows {
        let ok = r.matches_target.unwrap_or(false);
        pass &= ok;
        let got = match r.theta_star {
            Degradation::Never => "never".to_string(),
            Degradation::Beyond { theta_deg } => format!("{theta_deg:.2}"),
        };
        let residual = r.residual_deg.map_or("-".into(), |x| format!("{x:+.2}"));
        parts.push(format!("{} {got} ({residual}){}", r.scenario, if ok { "" } else { " MISS" }));
    }
    let uav_low = rows.iter().find(|r| r.scenario == "uav-low").expect("uav-low preset");
    pass &= uav_low.theta_star == Degradation::Never;
    outcome(pass, parts.join(", "))
}

fn oracle_domination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let instances = [(0.11, 8, 2, 6), (0.2, 8, 2, 6), (0.05, 8, 2, 6), (0.11, 8, 3, 5), (0.3, 8, 4, 4), (0.11, 6, 2, 4), (0.11, 8, 1, 7)];
    let mut violations = 0;
    let mut parts = Vec::new();
    for &(p, n, k, kp) in &instances {
        let ch = DiscreteChannel::bsc(p).unwrap();
        let inner: Arc<dyn InnerCode> = Arc::new(IdentityCode::new(n));
        let uniform = vec![1.0 / (1u64 << k) as f64; 1 << k];
        let avg = seed_averaged_leakage(inner, k, kp, &ch, &uniform, &mut rng, 0).unwrap();
        let params = CodeParams::new(n as u64, k as u64, kp as u64, 1.0, 0.0).unwrap();
        let mut min_bound = f64::INFINITY;
        for i in 1..=9 {
            let bound = leakage_bound_at(i as f64 / 10.0, &params, &ch).unwrap();
            min_bound = min_bound.min(bound);
            if avg.mean.strong_bits > bound {
                violations += 1;
            }
        }
        parts.push(format!("BSC({p}) n={n} k={k} k'={kp}: {:.4} <= {:.4}", avg.mean.strong_bits, min_bound));
    }
    outcome(violations == 0, format!("{violations} violations; {}", parts.join(", ")))
}

fn universal_hash() -> Outcome {
    let hash = |k: usize, kp: usize, i: u64| ToeplitzHash::new(k, kp, HashSeed::from_index(i, k, kp).unwrap()).unwrap();
    let family = |k: usize, kp: usize| -> Vec<ToeplitzHash> { (0..1u64 << seed_len(k, kp)).map(|i| hash(k, kp, i)).collect() };
    let mut worst = 0.0f64;
    let small = family(4, 4);
    for x in 0u64..256 {
        for y in x + 1..256 {
            let hits = small.iter().filter(|h| h.apply_u64(x) == h.apply_u64(y)).count();
            worst = worst.max(hits as f64 / small.len() as f64 * 16.0);
        }
    }
    let large = family(8, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pairs = 0;
    while pairs < 1000 {
        let (x, y) = (rand::Rng::random_range(&mut rng, 0..1u64 << 16), rand::Rng::random_range(&mut rng, 0..1u64 << 16));
        if x == y {
            continue;
        }
        pairs += 1;
        let hits = large.iter().filter(|h| h.apply_u64(x) == h.apply_u64(y)).count();
        worst = worst.max(hits as f64 / large.len() as f64 * 256.0);
    }
    outcome(worst <= 1.0, format!("max collision fraction / 2^-k = {worst}"))
}

fn small_s_limits() -> Outcome {
    let s = 1e-4;
    let mut worst = 0.0f64;
    for g in [0.3, 0.5] {
        let ch = BpskAwgn::new(g, 1.0).unwrap();
        let i_nats = bpsk_mi(&ch).unwrap() * std::f64::consts::LN_2;
        for v in [e0(s, &ch).unwrap(), psi(s, &ch).unwrap()] {
            worst = worst.max((v / s - i_nats).abs() / i_nats);
        }
    }
    outcome(worst < 1e-3, format!("max relative error {worst:e}"))
}

fn codec_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    let identity: Arc<dyn InnerCode> = Arc::new(IdentityCode::new(8));
    let hamming: Arc<dyn InnerCode> = Arc::new(LinearCode::hamming74());
    for _ in 0..100 {
        let code = CosetCode::new(identity.clone(), ToeplitzHash::new(4, 4, HashSeed::random(&mut rng, 4, 4)).unwrap()).unwrap();
        for m in 0..16 {
            for l in 0..16 {
                let mv = BitVec::from_u64(m, 4);
                if code.decode(&code.encode(&mv, &BitVec::from_u64(l, 4)).unwrap()).unwrap() != mv {
                    failures += 1;
                }
            }
        }
        let code = CosetCode::new(hamming.clone(), ToeplitzHash::new(2, 2, HashSeed::random(&mut rng, 2, 2)).unwrap()).unwrap();
        for m in 0..4 {
            for l in 0..4 {
                let mv = BitVec::from_u64(m, 2);
                let x = code.encode(&mv, &BitVec::from_u64(l, 2)).unwrap();
                for flip in 0..=7 {
                    let mut y = x.clone();
                    if flip < 7 {
                        y.flip(flip);
                    }
                    if code.decode(&y).map_or(true, |d| d != mv) {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(failures == 0, format!("{failures} failures over 100 seeds per code"))
}

fn spatial_map() -> Outcome {
    let sc = preset_by_name(SPATIAL_PRESET).unwrap().resolve().unwrap();
    let Some(t) = satsec_core::geometry::degradation_angle(&sc.pattern, &sc.eve, &sc.geometry).unwrap().threshold() else {
        return outcome(false, "spatial preset is never degraded");
    };
    let start = (t - 5.0).max(0.0);
    let thetas: Vec<f64> = (0..=80).map(|i| start + i as f64 * 0.25).filter(|&x| x <= 90.0).collect();
    let rows = run_spatial_map(Frame::Short, &sc, 0.18, &thetas, None).unwrap();
    let rises = rows.windows(2).filter(|w| w[1].point.bound > w[0].point.bound).count();
    let misflagged = rows.iter().filter(|r| r.point.gamma_g0 >= 1.0 && r.point.guaranteed).count();
    let first_secure = rows.iter().find(|r| r.point.guaranteed).map(|r| r.point.theta_deg);
    outcome(
        rises == 0 && misflagged == 0 && first_secure.is_some(),
        format!(
            "{}: theta*={t:.2}, bound rises {rises}, non-degraded cells flagged secure {misflagged}, first guaranteed theta {first_secure:?}",
            sc.name
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "secrecy-capacity zero line", Duration::from_secs(1), zero_line),
        (2, "capacity surface shape", Duration::from_secs(30), surface_shape),
        (3, "finite-length leakage below 1e-5", Duration::from_secs(10), finite_length),
        (4, "region angles within 1.5 deg", Duration::from_secs(10), region_angles),
        (5, "oracle leakage dominated by bound", Duration::from_secs(300), oracle_domination),
        (6, "universal-2 hash family", Duration::from_secs(60), universal_hash),
        (7, "small-s limits", Duration::from_secs(5), small_s_limits),
        (8, "codec round trip", Duration::from_secs(10), codec_round_trip),
        (9, "spatial map", Duration::from_secs(30), spatial_map),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= budget;
        failed += usize::from(!pass);
        println!(
            "{} criterion {id} ({name}) [{:.2?} of {:?}]: {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
