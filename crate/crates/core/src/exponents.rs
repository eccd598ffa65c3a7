//! Leakage exponents and bounds for privacy amplification by a universal
//! hash on top of an error-correcting code.
//!
//! Channel functionals (`psi`, `e0`) are in nats. Exponents are reported in
//! bits per channel use, bounds as plain probabilities-like numbers.

use std::f64::consts::{LN_2, LOG2_E};
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{regularized_coefficient, AntennaPattern, EveSystem, LinkGeometry};
use crate::infotheory::{check_distribution, format_f64, log_output_density, BpskAwgn, DiscreteChannel};
use crate::numeric::{golden_section_max, integrate, log_sum_exp, QuadConfig};

/// Largest admissible `s` for `E0`; `1/(1-s)` overflows the log-domain
/// formulation beyond this.
pub const S_MAX: f64 = 1.0 - 1e-6;

/// Bounds are reported no smaller than this.
pub const BOUND_FLOOR: f64 = 1e-300;

/// Channel functionals under a fixed input distribution.
pub trait SecrecyChannel: Sync {
    fn input_size(&self) -> usize;

    /// `log sum_{x,z} q(x) W(z|x)^{1+s} W_Z(z)^{-s}` in nats.
    fn psi(&self, s: f64, q: &[f64]) -> Result<f64>;

    /// `log sum_z ( sum_x q(x) W(z|x)^{1/(1-s)} )^{1-s}` in nats.
    fn e0(&self, s: f64, q: &[f64]) -> Result<f64>;

    fn uniform_input(&self) -> Vec<f64> {
        let m = self.input_size();
        vec![1.0 / m as f64; m]
    }
}

fn check_psi_s(s: f64) -> Result<()> {
    if !(s.is_finite() && (0.0..=1.0).contains(&s)) {
        return Err(Error::Domain { what: "s", value: s, expected: "within [0, 1]" });
    }
    Ok(())
}

fn check_e0_s(s: f64) -> Result<()> {
    if !(s.is_finite() && (0.0..=S_MAX).contains(&s)) {
        return Err(Error::Domain { what: "s", value: s, expected: "within [0, 1 - 1e-6]" });
    }
    Ok(())
}

impl SecrecyChannel for DiscreteChannel {
    fn input_size(&self) -> usize {
        self.inputs()
    }

    fn psi(&self, s: f64, q: &[f64]) -> Result<f64> {
        check_psi_s(s)?;
        check_distribution("input distribution", q, self.inputs())?;
        let out = self.output_distribution(q);
        // log(1 + sum q W ((W/W_Z)^s - 1)) keeps precision as s -> 0
        let mut acc = 0.0;
        for (x, row) in self.rows().iter().enumerate() {
            for (z, &w) in row.iter().enumerate() {
                if w > 0.0 && q[x] > 0.0 {
                    acc += q[x] * w * (s * (w / out[z]).ln()).exp_m1();
                }
            }
        }
        Ok(acc.ln_1p())
    }

    fn e0(&self, s: f64, q: &[f64]) -> Result<f64> {
        check_e0_s(s)?;
        check_distribution("input distribution", q, self.inputs())?;
        let t = 1.0 / (1.0 - s);
        let mut acc = 0.0;
        let mut tilted = Vec::with_capacity(self.inputs());
        let mut plain = Vec::with_capacity(self.inputs());
        for z in 0..self.outputs() {
            tilted.clear();
            plain.clear();
            for (x, row) in self.rows().iter().enumerate() {
                let lw = row[z].ln();
                let lq = q[x].ln();
                tilted.push(t * lw + lq);
                plain.push(lw + lq);
            }
            let lz = log_sum_exp(&plain);
            if lz == f64::NEG_INFINITY {
                continue;
            }
            acc += lz.exp() * (log_sum_exp(&tilted) / t - lz).exp_m1();
        }
        Ok(acc.ln_1p())
    }
}

impl SecrecyChannel for BpskAwgn {
    fn input_size(&self) -> usize {
        2
    }

    fn psi(&self, s: f64, q: &[f64]) -> Result<f64> {
        check_psi_s(s)?;
        check_distribution("input distribution", q, 2)?;
        if self.amplitude == 0.0 {
            return Ok(0.0);
        }
        let (lq0, lq1) = (q[0].ln(), q[1].ln());
        let f = |y: f64| {
            let l0 = self.log_density(y, 1.0);
            let l1 = self.log_density(y, -1.0);
            let lz = log_sum_exp(&[l0 + lq0, l1 + lq1]);
            let mut v = 0.0;
            if q[0] > 0.0 {
                v += q[0] * l0.exp() * (s * (l0 - lz)).exp_m1();
            }
            if q[1] > 0.0 {
                v += q[1] * l1.exp() * (s * (l1 - lz)).exp_m1();
            }
            v
        };
        let r = integrate(f, &self.breakpoints(), QuadConfig::default())?;
        Ok(r.value.ln_1p())
    }

    fn e0(&self, s: f64, q: &[f64]) -> Result<f64> {
        check_e0_s(s)?;
        check_distribution("input distribution", q, 2)?;
        if self.amplitude == 0.0 {
            return Ok(0.0);
        }
        let t = 1.0 / (1.0 - s);
        let (lq0, lq1) = (q[0].ln(), q[1].ln());
        let uniform = q[0] == 0.5 && q[1] == 0.5;
        let f = |y: f64| {
            let l0 = self.log_density(y, 1.0);
            let l1 = self.log_density(y, -1.0);
            let lz = if uniform { log_output_density(self, y) } else { log_sum_exp(&[l0 + lq0, l1 + lq1]) };
            let lg = log_sum_exp(&[t * l0 + lq0, t * l1 + lq1]) / t;
            lz.exp() * (lg - lz).exp_m1()
        };
        let r = integrate(f, &self.breakpoints(), QuadConfig::default())?;
        Ok(r.value.ln_1p())
    }
}

/// `psi(s)` in nats under the uniform input.
pub fn psi<C: SecrecyChannel + ?Sized>(s: f64, ch: &C) -> Result<f64> {
    ch.psi(s, &ch.uniform_input())
}

/// `E0(s)` in nats under the uniform input.
pub fn e0<C: SecrecyChannel + ?Sized>(s: f64, ch: &C) -> Result<f64> {
    ch.e0(s, &ch.uniform_input())
}

/// Block length and rates of the concatenated code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeParams {
    /// Channel uses per codeword.
    pub n: u64,
    /// Secret message bits.
    pub k: u64,
    /// Random bits sacrificed to privacy amplification.
    pub k_prime: u64,
    /// Rate of the inner error-correcting code.
    pub rho: f64,
    /// Inner decoder error probability.
    pub epsilon_b: f64,
}

impl CodeParams {
    pub fn new(n: u64, k: u64, k_prime: u64, rho: f64, epsilon_b: f64) -> Result<Self> {
        let p = CodeParams { n, k, k_prime, rho, epsilon_b };
        p.validate()?;
        Ok(p)
    }

    /// Splits `floor(n rho)` inner-code bits into `round(n rho_sac)`
    /// sacrificed bits and the remaining secret bits.
    pub fn from_rates(n: u64, rho: f64, rho_sac: f64, epsilon_b: f64) -> Result<Self> {
        if !(rho_sac.is_finite() && rho_sac >= 0.0 && rho_sac <= rho + 1e-12) {
            return Err(Error::Domain { what: "rho_sac", value: rho_sac, expected: "within [0, rho]" });
        }
        let total = (n as f64 * rho + 1e-9).floor() as u64;
        let k_prime = ((n as f64 * rho_sac).round() as u64).min(total);
        CodeParams::new(n, total - k_prime, k_prime, rho, epsilon_b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "block length must be positive"));
        }
        if !(self.rho.is_finite() && self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::Domain { what: "rho", value: self.rho, expected: "within (0, 1]" });
        }
        if (self.k + self.k_prime) as f64 > self.n as f64 * self.rho + 1e-9 {
            return Err(Error::invalid("k + k_prime", "exceeds the inner code dimension n * rho"));
        }
        if !(0.0..=1.0).contains(&self.epsilon_b) {
            return Err(Error::Domain { what: "epsilon_b", value: self.epsilon_b, expected: "within [0, 1]" });
        }
        Ok(())
    }

    pub fn rho_sac(&self) -> f64 {
        self.k_prime as f64 / self.n as f64
    }

    pub fn rho_s(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Which optimum over `s` to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    /// Largest exponent, hence the tightest bound.
    #[default]
    Tightest,
    /// Minimum over `s in [1e-6, 1 - 1e-6]`, for reproducing published
    /// curves that print the minimum.
    LiteralMin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageBound {
    /// Exponent in bits per channel use.
    pub exponent: f64,
    /// `2^(-n exponent)`, floored at `1e-300`.
    pub bound: f64,
    /// Optimising `s`.
    pub s_star: f64,
    /// Set when the optimiser produced a non-finite value and a dense grid
    /// scan supplied the answer instead.
    pub grid_fallback: bool,
}

/// Hash-seed model for the bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedModel<'a> {
    /// `k'` uniform sacrificed bits.
    Uniform,
    /// Sacrificed randomness drawn from this law; `s k'` becomes
    /// `s H_{1+s}` in bits.
    Distribution(&'a [f64]),
}

/// `log2` of `(1/s) 2^(-s k') e^(n E0(s))`.
pub fn log2_leakage_bound_at<C: SecrecyChannel + ?Sized>(s: f64, params: &CodeParams, ch: &C) -> Result<f64> {
    log2_leakage_bound_seeded(s, params, ch, SeedModel::Uniform)
}

pub fn log2_leakage_bound_seeded<C: SecrecyChannel + ?Sized>(
    s: f64,
    params: &CodeParams,
    ch: &C,
    seed: SeedModel<'_>,
) -> Result<f64> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::Domain { what: "s", value: s, expected: "within (0, 1 - 1e-6]" });
    }
    let e = e0(s, ch)?;
    let penalty = match seed {
        SeedModel::Uniform => s * params.k_prime as f64,
        SeedModel::Distribution(dist) => s * renyi_correction(dist, s)?,
    };
    Ok(-s.log2() - penalty + params.n as f64 * e * LOG2_E)
}

/// Leakage bound at a fixed `s`.
pub fn leakage_bound_at<C: SecrecyChannel + ?Sized>(s: f64, params: &CodeParams, ch: &C) -> Result<f64> {
    Ok(log2_leakage_bound_at(s, params, ch)?.exp2())
}

/// Renyi entropy `H_{1+s}` of the seed law in bits.
pub fn renyi_correction(seed_dist: &[f64], s: f64) -> Result<f64> {
    if seed_dist.is_empty() {
        return Err(Error::invalid("seed distribution", "empty"));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain { what: "s", value: s, expected: "> 0" });
    }
    let sum: f64 = seed_dist.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || seed_dist.iter().any(|p| p.is_nan() || *p < 0.0) {
        return Err(Error::NotADistribution { what: "seed distribution", sum });
    }
    let logs: Vec<f64> = seed_dist.iter().filter(|p| **p > 0.0).map(|p| (1.0 + s) * p.ln()).collect();
    Ok((-log_sum_exp(&logs) / (s * LN_2)).max(0.0))
}

fn exponent_at<C: SecrecyChannel + ?Sized>(s: f64, rho_sac: f64, n: f64, ch: &C) -> Result<f64> {
    Ok(s * rho_sac + s.log2() / n - e0(s, ch)? * LOG2_E)
}

fn coarse_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=12).map(|i| 10f64.powf(-6.0 + i as f64 * 4.0 / 12.0)).collect();
    g.extend((1..50).map(|i| i as f64 * 0.02));
    g.extend((2..=6).map(|p| 1.0 - 10f64.powi(-p)));
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Optimal exponent over `s` for sacrifice rate `rho_sac` at block length
/// `n`. The objective `s rho_sac + log2(s)/n - E0(s) log2 e` is scanned on
/// a mixed log/linear grid, then the three best grid cells are refined by
/// golden-section search.
pub fn sacrifice_exponent<C: SecrecyChannel + ?Sized>(
    rho_sac: f64,
    n: u64,
    ch: &C,
    mode: ExponentMode,
) -> Result<LeakageBound> {
    if !(rho_sac.is_finite() && (0.0..=1.0).contains(&rho_sac)) {
        return Err(Error::Domain { what: "rho_sac", value: rho_sac, expected: "within [0, 1]" });
    }
    if n == 0 {
        return Err(Error::invalid("n", "block length must be positive"));
    }
    let nf = n as f64;
    let sign = match mode {
        ExponentMode::Tightest => 1.0,
        ExponentMode::LiteralMin => -1.0,
    };
    let grid = coarse_grid();
    let values: Vec<f64> = grid.iter().map(|&s| exponent_at(s, rho_sac, nf, ch)).collect::<Result<_>>()?;

    let mut best = (f64::NAN, f64::NEG_INFINITY);
    let mut grid_fallback = false;
    if values.iter().all(|v| v.is_finite()) {
        let mut order: Vec<usize> = (0..grid.len()).collect();
        order.sort_by(|&a, &b| (sign * values[b]).total_cmp(&(sign * values[a])));
        for &i in order.iter().take(3) {
            if sign * values[i] > best.1 {
                best = (grid[i], sign * values[i]);
            }
            let lo = if i == 0 { grid[0] } else { grid[i - 1] };
            let hi = if i + 1 == grid.len() { grid[i] } else { grid[i + 1] };
            let mut failure = None;
            let r = golden_section_max(
                |s| match exponent_at(s, rho_sac, nf, ch) {
                    Ok(v) => sign * v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NAN
                    }
                },
                lo,
                hi,
                1e-10,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            if !r.value.is_finite() {
                grid_fallback = true;
                break;
            }
            if r.value > best.1 {
                best = (r.x, r.value);
            }
        }
    } else {
        grid_fallback = true;
    }
    if grid_fallback {
        best = (f64::NAN, f64::NEG_INFINITY);
        for i in 1..=2000 {
            let s = (i as f64 / 2000.0).clamp(1e-6, S_MAX);
            let v = sign * exponent_at(s, rho_sac, nf, ch)?;
            if v.is_finite() && v > best.1 {
                best = (s, v);
            }
        }
        if !best.1.is_finite() {
            return Err(Error::Quadrature { requested: 0.0, achieved: f64::INFINITY });
        }
    }
    let exponent = sign * best.1;
    Ok(LeakageBound { exponent, bound: bound_from_exponent(exponent, nf), s_star: best.0, grid_fallback })
}

/// Same optimisation phrased on a concrete code.
pub fn code_exponent<C: SecrecyChannel + ?Sized>(params: &CodeParams, ch: &C, mode: ExponentMode) -> Result<LeakageBound> {
    params.validate()?;
    sacrifice_exponent(params.rho_sac(), params.n, ch, mode)
}

fn bound_from_exponent(exponent: f64, n: f64) -> f64 {
    (-n * exponent).exp2().max(BOUND_FLOOR)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialPoint {
    pub theta_deg: f64,
    pub gamma_g0: f64,
    pub exponent_bits: f64,
    pub bound: f64,
    /// Eve is degraded here and the bound is below the target.
    pub guaranteed: bool,
}

/// Leakage bound for Eve at each angle in `thetas`, holding the rest of
/// `geom` fixed. Non-degraded angles still get a bound but are never
/// flagged as guaranteed.
#[allow(clippy::too_many_arguments)]
pub fn spatial_leakage(
    pattern: &AntennaPattern,
    eve: &EveSystem,
    geom: &LinkGeometry,
    n_b: f64,
    rho_sac: f64,
    n: u64,
    target: f64,
    thetas: &[f64],
) -> Result<Vec<SpatialPoint>> {
    thetas
        .par_iter()
        .map(|&theta_deg| {
            let gamma_g0 = regularized_coefficient(pattern, eve, geom, theta_deg)?;
            let ch = BpskAwgn::new(gamma_g0, n_b)?;
            let lb = sacrifice_exponent(rho_sac, n, &ch, ExponentMode::Tightest)?;
            Ok(SpatialPoint {
                theta_deg,
                gamma_g0,
                exponent_bits: lb.exponent,
                bound: lb.bound.min(1.0),
                guaranteed: gamma_g0 < 1.0 && lb.bound < target,
            })
        })
        .collect()
}

pub fn write_spatial_csv<W: Write>(points: &[SpatialPoint], mut out: W) -> io::Result<()> {
    writeln!(out, "theta_deg,gamma_g0,exponent_bits,bound,guaranteed")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_f64(p.theta_deg),
            format_f64(p.gamma_g0),
            format_f64(p.exponent_bits),
            format_f64(p.bound),
            p.guaranteed
        )?;
    }
    Ok(())
}
