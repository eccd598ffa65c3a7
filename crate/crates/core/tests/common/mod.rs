#![allow(dead_code)]

use std::f64::consts::{LN_2, PI};

/// Normalised Hermite polynomial `p_n(z)` and `p_{n-1}(z)`.
fn hermite(n: usize, z: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (PI.powf(-0.25), 0.0);
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, p2)
}

/// Gauss-Hermite nodes and weights for `int exp(-x^2) f(x) dx`. Positive
/// roots are bracketed by sign changes on a fine grid, then bisected.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let top = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
    let step = 1e-3;
    let mut roots = Vec::with_capacity(n);
    if n % 2 == 1 {
        roots.push(0.0);
    }
    let mut lo = if n % 2 == 1 { step } else { 0.0 };
    let mut f_lo = hermite(n, lo).0;
    while lo < top {
        let hi = lo + step;
        let f_hi = hermite(n, hi).0;
        if f_lo.signum() != f_hi.signum() {
            let (mut a, mut b, mut fa) = (lo, hi, f_lo);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = hermite(n, m).0;
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
            roots.push(-0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
    }
    assert_eq!(roots.len(), n, "Gauss-Hermite bracketing missed roots");
    roots.sort_by(f64::total_cmp);
    let weights = roots
        .iter()
        .map(|&z| {
            let pp = (2.0 * n as f64).sqrt() * hermite(n, z).1;
            2.0 / (pp * pp)
        })
        .collect();
    (roots, weights)
}

/// `E[f(N)]` for standard normal `N` by 200-node Gauss-Hermite.
pub fn gaussian_expectation(f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_hermite(200);
    x.iter().zip(&w).map(|(xi, wi)| wi * f(std::f64::consts::SQRT_2 * xi)).sum::<f64>() / PI.sqrt()
}

/// `E[f(N)]` for standard normal `N` by composite Simpson on `[-40, 40]`;
/// slower than Gauss-Hermite but insensitive to sharp integrands.
pub fn gaussian_expectation_simpson(f: impl Fn(f64) -> f64) -> f64 {
    let m = 800_000;
    let h = 80.0 / m as f64;
    let g = |x: f64| (-0.5 * x * x).exp() / (2.0 * PI).sqrt() * f(x);
    let mut sum = g(-40.0) + g(40.0);
    for i in 1..m {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * g(-40.0 + i as f64 * h);
    }
    sum * h / 3.0
}

/// BPSK mutual information in bits via the Simpson expectation.
pub fn mi_oracle_simpson(a: f64, var: f64) -> f64 {
    let sd = var.sqrt();
    1.0 - gaussian_expectation_simpson(|n| softplus(-2.0 * a * (a + sd * n) / var)) / LN_2
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// BPSK mutual information in bits, real-noise variance `var`.
pub fn mi_oracle(a: f64, var: f64) -> f64 {
    let sd = var.sqrt();
    1.0 - gaussian_expectation(|n| softplus(-2.0 * a * (a + sd * n) / var)) / LN_2
}

/// `E0(s)` in nats for uniform BPSK, real-noise variance `var`:
/// `log E_{Y|+a}[ (1/2 (1 + r^t))^{1/t} ]` with `r = W(y|-a)/W(y|+a)`.
pub fn e0_oracle(s: f64, a: f64, var: f64) -> f64 {
    let t = 1.0 / (1.0 - s);
    let sd = var.sqrt();
    gaussian_expectation_simpson(|n| {
        let log_r = -2.0 * a * (a + sd * n) / var;
        ((softplus(t * log_r) - LN_2) / t).exp()
    })
    .ln()
}

/// `psi(s)` in nats for uniform BPSK: `log E_{Y|+a}[ (2 / (1 + r))^s ]`.
pub fn psi_oracle(s: f64, a: f64, var: f64) -> f64 {
    let sd = var.sqrt();
    gaussian_expectation_simpson(|n| {
        let log_r = -2.0 * a * (a + sd * n) / var;
        (s * (LN_2 - softplus(log_r))).exp()
    })
    .ln()
}

pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Closed forms for BSC(p) with uniform input, in nats.
pub fn bsc_psi(s: f64, p: f64) -> f64 {
    s * LN_2 + ((1.0 - p).powf(1.0 + s) + p.powf(1.0 + s)).ln()
}

pub fn bsc_e0(s: f64, p: f64) -> f64 {
    let t = 1.0 / (1.0 - s);
    let (hi, lo) = if p <= 0.5 { (1.0 - p, p) } else { (p, 1.0 - p) };
    // factor out the dominant term so large t cannot underflow
    let inner = t * hi.ln() + (0.5 * (1.0 + (lo / hi).powf(t))).ln();
    LN_2 + (1.0 - s) * inner
}
