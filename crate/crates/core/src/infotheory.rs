//! Mutual information and secrecy capacity for the BPSK-input Gaussian
//! wiretap channel, plus exact discrete-channel information measures.
//!
//! All returned information quantities are in bits; integrals run in nats
//! and are converted once at the end.

use std::f64::consts::{LN_2, PI};
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{integrate, log_sum_exp, softplus, QuadConfig, QuadResult};

/// Half-width of the integration window, in noise standard deviations.
/// The Gaussian tail mass beyond 12 sigma is below 2e-33.
pub const TRUNCATION_SIGMAS: f64 = 12.0;

/// How `n_B` maps to the variance of the real noise component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseConvention {
    /// `n_B` is the complex noise energy per symbol; the in-phase component
    /// carries `n_B / 2`. Densities are `exp(-(y-a)^2/n_B) / sqrt(pi n_B)`.
    #[default]
    RealPartOfComplex,
    /// `n_B` is the variance of the real observation.
    PerDimension,
}

impl NoiseConvention {
    pub fn variance(self, n_b: f64) -> f64 {
        match self {
            NoiseConvention::RealPartOfComplex => 0.5 * n_b,
            NoiseConvention::PerDimension => n_b,
        }
    }
}

/// Noise level for a given `E_s / n_B` in dB with unit symbol energy.
pub fn snr_db_to_n_b(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

pub fn n_b_to_snr_db(n_b: f64) -> f64 {
    -10.0 * n_b.log10()
}

/// Real-output channel `Y = a X + N`, `X` uniform on `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpskAwgn {
    pub amplitude: f64,
    pub n_b: f64,
    pub convention: NoiseConvention,
}

impl BpskAwgn {
    pub fn new(amplitude: f64, n_b: f64) -> Result<Self> {
        BpskAwgn::with_convention(amplitude, n_b, NoiseConvention::default())
    }

    pub fn with_convention(amplitude: f64, n_b: f64, convention: NoiseConvention) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::Domain { what: "amplitude", value: amplitude, expected: "finite and >= 0" });
        }
        if !(n_b.is_finite() && n_b > 0.0) {
            return Err(Error::Domain { what: "n_b", value: n_b, expected: "finite and > 0" });
        }
        Ok(BpskAwgn { amplitude, n_b, convention })
    }

    pub fn variance(&self) -> f64 {
        self.convention.variance(self.n_b)
    }

    pub fn sigma(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Natural log of the output density given input symbol `x in {+1,-1}`.
    #[inline]
    pub fn log_density(&self, y: f64, x: f64) -> f64 {
        let var = self.variance();
        let d = y - self.amplitude * x;
        -d * d / (2.0 * var) - 0.5 * (2.0 * PI * var).ln()
    }

    /// Breakpoints that split the truncated real line around both signal
    /// points, so no Gaussian bump falls between quadrature nodes.
    pub fn breakpoints(&self) -> Vec<f64> {
        let a = self.amplitude;
        let sd = self.sigma();
        let lo = -a - TRUNCATION_SIGMAS * sd;
        let hi = a + TRUNCATION_SIGMAS * sd;
        let mut pts = vec![lo, hi, 0.0];
        for c in [-a, a] {
            for k in [-TRUNCATION_SIGMAS, -4.0, -1.0, 0.0, 1.0, 4.0, TRUNCATION_SIGMAS] {
                pts.push(c + k * sd);
            }
        }
        let mut pts: Vec<f64> = pts.into_iter().filter(|p| *p >= lo && *p <= hi).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
        pts
    }
}

/// Finite-alphabet channel `W[z|x]`, rows indexed by input.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteChannel {
    rows: Vec<Vec<f64>>,
}

impl DiscreteChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || width == 0 {
            return Err(Error::invalid("transition matrix", "empty"));
        }
        for row in &rows {
            if row.len() != width {
                return Err(Error::Dimension { what: "transition row", expected: width, got: row.len() });
            }
            if row.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(Error::invalid("transition matrix", "entries must be finite and >= 0"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::NotADistribution { what: "transition row", sum });
            }
        }
        Ok(DiscreteChannel { rows })
    }

    pub fn bsc(p: f64) -> Result<Self> {
        DiscreteChannel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    pub fn identity(size: usize) -> Result<Self> {
        DiscreteChannel::new((0..size).map(|i| (0..size).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect())
    }

    /// Every input produces the same output law.
    pub fn useless(inputs: usize, output: Vec<f64>) -> Result<Self> {
        DiscreteChannel::new(vec![output; inputs])
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn prob(&self, z: usize, x: usize) -> f64 {
        self.rows[x][z]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Output law under input distribution `q`.
    pub fn output_distribution(&self, q: &[f64]) -> Vec<f64> {
        (0..self.outputs())
            .map(|z| self.rows.iter().zip(q).map(|(row, qx)| qx * row[z]).sum())
            .collect()
    }
}

pub(crate) fn check_distribution(what: &'static str, q: &[f64], expected_len: usize) -> Result<()> {
    if q.len() != expected_len {
        return Err(Error::Dimension { what, expected: expected_len, got: q.len() });
    }
    if q.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::invalid(what, "entries must be finite and >= 0"));
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution { what, sum });
    }
    Ok(())
}

/// Exact `I(X;Z)` in bits by direct summation.
pub fn discrete_mi(ch: &DiscreteChannel, input: &[f64]) -> Result<f64> {
    check_distribution("input distribution", input, ch.inputs())?;
    let out = ch.output_distribution(input);
    let mut total = 0.0;
    for (x, row) in ch.rows().iter().enumerate() {
        if input[x] == 0.0 {
            continue;
        }
        for (z, &w) in row.iter().enumerate() {
            if w > 0.0 {
                total += input[x] * w * (w / out[z]).log2();
            }
        }
    }
    Ok(total.max(0.0))
}

/// `I(X;Y)` in bits under uniform BPSK input, with the quadrature error
/// estimate (also in bits).
pub fn bpsk_mi_detailed(ch: &BpskAwgn, cfg: QuadConfig) -> Result<QuadResult> {
    if ch.amplitude == 0.0 {
        return Ok(QuadResult { value: 0.0, error: 0.0, evaluations: 0 });
    }
    // I = 1 - E_{Y|X=+1}[ log2(1 + exp(-LLR(Y))) ],  LLR(y) = 2 a y / var
    let var = ch.variance();
    let a = ch.amplitude;
    let llr_scale = 2.0 * a / var;
    let norm = 1.0 / (2.0 * PI * var).sqrt();
    let integrand = |y: f64| {
        let d = y - a;
        norm * (-d * d / (2.0 * var)).exp() * softplus(-llr_scale * y)
    };
    let r = integrate(integrand, &ch.breakpoints(), cfg)?;
    let value = (1.0 - r.value / LN_2).clamp(0.0, 1.0);
    Ok(QuadResult { value, error: r.error / LN_2, evaluations: r.evaluations })
}

/// `I(X;Y)` in bits for uniform BPSK input.
pub fn bpsk_mi(ch: &BpskAwgn) -> Result<f64> {
    Ok(bpsk_mi_detailed(ch, QuadConfig::default())?.value)
}

/// BPSK secrecy capacity `(I_Bob - I_Eve)_+` in bits per channel use for
/// Bob at unit amplitude and Eve at regularised amplitude `gamma_g0`.
pub fn secrecy_capacity(gamma_g0: f64, n_b: f64) -> Result<f64> {
    secrecy_capacity_with(gamma_g0, n_b, NoiseConvention::default())
}

pub fn secrecy_capacity_with(gamma_g0: f64, n_b: f64, convention: NoiseConvention) -> Result<f64> {
    if !(gamma_g0.is_finite() && gamma_g0 >= 0.0) {
        return Err(Error::Domain { what: "gamma_g0", value: gamma_g0, expected: "finite and >= 0" });
    }
    if gamma_g0 >= 1.0 {
        BpskAwgn::with_convention(1.0, n_b, convention)?;
        return Ok(0.0);
    }
    let bob = bpsk_mi(&BpskAwgn::with_convention(1.0, n_b, convention)?)?;
    let eve = bpsk_mi(&BpskAwgn::with_convention(gamma_g0, n_b, convention)?)?;
    Ok((bob - eve).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityCell {
    pub gamma_g0: f64,
    pub snr_db: f64,
    pub cs_bits: f64,
}

/// Secrecy capacity on a `gamma_g0 x SNR` grid, row-major in `gamma_grid`.
/// SNR is `E_s / n_B` in dB with `E_s = 1`.
pub fn capacity_surface(gamma_grid: &[f64], snr_grid: &[f64]) -> Result<Vec<CapacityCell>> {
    capacity_surface_with(gamma_grid, snr_grid, NoiseConvention::default())
}

pub fn capacity_surface_with(
    gamma_grid: &[f64],
    snr_grid: &[f64],
    convention: NoiseConvention,
) -> Result<Vec<CapacityCell>> {
    if gamma_grid.is_empty() || snr_grid.is_empty() {
        return Err(Error::invalid("capacity grid", "grids must be non-empty"));
    }
    if let Some(&g) = gamma_grid.iter().find(|g| !(0.0..=1.2).contains(*g)) {
        return Err(Error::Domain { what: "gamma_g0 grid", value: g, expected: "within [0, 1.2]" });
    }
    if let Some(&s) = snr_grid.iter().find(|s| !(-10.0..=20.0).contains(*s)) {
        return Err(Error::Domain { what: "snr grid", value: s, expected: "within [-10, 20] dB" });
    }
    let cells: Vec<(f64, f64)> = gamma_grid
        .iter()
        .flat_map(|&g| snr_grid.iter().map(move |&s| (g, s)))
        .collect();
    cells
        .into_par_iter()
        .map(|(gamma_g0, snr_db)| {
            let cs_bits = secrecy_capacity_with(gamma_g0, snr_db_to_n_b(snr_db), convention)?;
            Ok(CapacityCell { gamma_g0, snr_db, cs_bits })
        })
        .collect()
}

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e15)`.
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write_capacity_csv<W: Write>(cells: &[CapacityCell], mut out: W) -> io::Result<()> {
    writeln!(out, "gamma_g0,snr_db,cs_bits")?;
    for c in cells {
        writeln!(out, "{},{},{}", format_f64(c.gamma_g0), format_f64(c.snr_db), format_f64(c.cs_bits))?;
    }
    Ok(())
}

/// log of the uniform-input output density of a BPSK channel.
pub(crate) fn log_output_density(ch: &BpskAwgn, y: f64) -> f64 {
    log_sum_exp(&[ch.log_density(y, 1.0), ch.log_density(y, -1.0)]) - LN_2
}
