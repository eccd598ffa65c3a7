//! Exact leakage of small coset codes over discrete memoryless channels.
//!
//! For one seed, `p(z^n|m) = 2^-k' sum_l W^n(z^n | phi_e(m xor T l, l))` is
//! tabulated over all `z^n`, giving both `I(M;Z^n)` and
//! `E_M D(p_{Z^n|M} || q_{Z^n})` with `q` the i.i.d. uniform-input output law.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use super::hash::{seed_len, HashSeed, ToeplitzHash};
use super::inner::InnerCode;
use super::CosetCode;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::infotheory::{check_distribution, DiscreteChannel};
use crate::numeric::gaussian_q;

/// Cap on `2^(k+k') |Z|^n`.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

/// Seeds are enumerated exhaustively up to this many seed bits.
pub const EXHAUSTIVE_SEED_BITS: usize = 16;

pub const MIN_SAMPLED_SEEDS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageReport {
    /// `I(M; Z^n)` in bits.
    pub strong_bits: f64,
    /// `E_M D(p_{Z^n|M} || q_{Z^n})` in bits; never below `strong_bits`.
    pub reference_bits: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedAverage {
    pub mean: LeakageReport,
    /// Standard error of `mean.reference_bits`; zero when exhaustive.
    pub std_error: f64,
    pub seeds: u64,
    pub exhaustive: bool,
}

/// Sign-quantised Gaussian observation: BSC with crossover
/// `Q(gamma_g0 / sqrt(n_B / 2))`. Oracle surrogate only.
pub fn hard_decision_bsc(gamma_g0: f64, n_b: f64) -> Result<DiscreteChannel> {
    if !(n_b.is_finite() && n_b > 0.0) {
        return Err(Error::Domain { what: "n_b", value: n_b, expected: "finite and > 0" });
    }
    DiscreteChannel::bsc(gaussian_q(gamma_g0 / (0.5 * n_b).sqrt()))
}

/// Per-codeword likelihood vectors, shared by every seed.
struct Oracle {
    k: usize,
    k_prime: usize,
    outputs: usize,
    /// `likelihood[u * outputs + z] = W^n(z | phi_e(u))`, `u` integer-packed.
    likelihood: Vec<f64>,
    reference: Vec<f64>,
}

impl Oracle {
    fn build(inner: &dyn InnerCode, k: usize, k_prime: usize, ch: &DiscreteChannel) -> Result<Self> {
        if ch.inputs() != 2 {
            return Err(Error::Dimension { what: "channel input alphabet", expected: 2, got: ch.inputs() });
        }
        let n = inner.length();
        let z = ch.outputs();
        let outputs = (z as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        let terms = (1u128 << (k + k_prime).min(127)).saturating_mul(outputs);
        if k + k_prime >= 64 || terms > ENUMERATION_LIMIT {
            return Err(Error::TooLarge { terms, limit: ENUMERATION_LIMIT });
        }
        let outputs = outputs as usize;
        let words = 1usize << (k + k_prime);
        let mut likelihood = Vec::with_capacity(words * outputs);
        for u in 0..words {
            let x = inner.encode(&BitVec::from_u64(u as u64, k + k_prime))?;
            likelihood.extend(product_law(n, z, |i, zi| ch.prob(zi, usize::from(x.get(i)))));
        }
        let marginal: Vec<f64> = (0..z).map(|zi| 0.5 * (ch.prob(zi, 0) + ch.prob(zi, 1))).collect();
        let reference = product_law(n, z, |_, zi| marginal[zi]);
        Ok(Oracle { k, k_prime, outputs, likelihood, reference })
    }

    fn leakage(&self, hash: &ToeplitzHash, message_dist: &[f64]) -> LeakageReport {
        let (k, kp, len) = (self.k, self.k_prime, self.outputs);
        let weight = (-(kp as f64)).exp2();
        let conditionals: Vec<Vec<f64>> = (0..1u64 << k)
            .map(|m| {
                let mut p = vec![0.0; len];
                for l in 0..1u64 << kp {
                    let u = (m ^ hash.mix_u64(l)) | (l << k);
                    let row = &self.likelihood[u as usize * len..(u as usize + 1) * len];
                    for (acc, w) in p.iter_mut().zip(row) {
                        *acc += weight * w;
                    }
                }
                p
            })
            .collect();
        let mut marginal = vec![0.0; len];
        for (pm, cond) in message_dist.iter().zip(&conditionals) {
            for (acc, c) in marginal.iter_mut().zip(cond) {
                *acc += pm * c;
            }
        }
        let mut strong = 0.0;
        let mut reference = 0.0;
        for (pm, cond) in message_dist.iter().zip(&conditionals) {
            if *pm == 0.0 {
                continue;
            }
            for ((c, pz), qz) in cond.iter().zip(&marginal).zip(&self.reference) {
                if *c > 0.0 {
                    strong += pm * c * (c / pz).log2();
                    reference += pm * c * (c / qz).log2();
                }
            }
        }
        LeakageReport { strong_bits: strong.max(0.0), reference_bits: reference.max(strong).max(0.0) }
    }
}

/// `prod_i f(i, z_i)` for every `z^n`, digit `i` of the index in base `z`.
fn product_law(n: usize, z: usize, f: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut law = vec![1.0];
    for i in 0..n {
        let stride = law.len();
        let mut next = vec![0.0; stride * z];
        for zi in 0..z {
            let w = f(i, zi);
            for (dst, src) in next[zi * stride..(zi + 1) * stride].iter_mut().zip(&law) {
                *dst = src * w;
            }
        }
        law = next;
    }
    law
}

fn check_messages(message_dist: &[f64], k: usize) -> Result<()> {
    if k >= 32 {
        return Err(Error::TooLarge { terms: 1u128 << k, limit: ENUMERATION_LIMIT });
    }
    check_distribution("message distribution", message_dist, 1 << k)
}

/// Exact leakage of `code` (one fixed seed).
pub fn exact_leakage(code: &CosetCode, ch: &DiscreteChannel, message_dist: &[f64]) -> Result<LeakageReport> {
    check_messages(message_dist, code.k())?;
    let oracle = Oracle::build(code.inner().as_ref(), code.k(), code.k_prime(), ch)?;
    Ok(oracle.leakage(code.hash(), message_dist))
}

/// Leakage averaged over the hash family: every seed when the seed has at
/// most 16 bits, otherwise `max(samples, 10^4)` seeds drawn from `rng`.
pub fn seed_averaged_leakage<R: Rng + ?Sized>(
    inner: Arc<dyn InnerCode>,
    k: usize,
    k_prime: usize,
    ch: &DiscreteChannel,
    message_dist: &[f64],
    rng: &mut R,
    samples: usize,
) -> Result<SeedAverage> {
    if inner.dimension() != k + k_prime {
        return Err(Error::Dimension { what: "inner code dimension (k + k')", expected: k + k_prime, got: inner.dimension() });
    }
    check_messages(message_dist, k)?;
    let oracle = Oracle::build(inner.as_ref(), k, k_prime, ch)?;
    let bits = seed_len(k, k_prime);
    let exhaustive = bits <= EXHAUSTIVE_SEED_BITS;
    let seeds: Vec<HashSeed> = if exhaustive {
        (0..1u64 << bits).map(|i| HashSeed::from_index(i, k, k_prime)).collect::<Result<_>>()?
    } else {
        (0..samples.max(MIN_SAMPLED_SEEDS)).map(|_| HashSeed::random(rng, k, k_prime)).collect()
    };
    let reports: Vec<LeakageReport> = seeds
        .into_par_iter()
        .map(|seed| Ok(oracle.leakage(&ToeplitzHash::new(k, k_prime, seed)?, message_dist)))
        .collect::<Result<_>>()?;
    let count = reports.len() as f64;
    let strong = reports.iter().map(|r| r.strong_bits).sum::<f64>() / count;
    let reference = reports.iter().map(|r| r.reference_bits).sum::<f64>() / count;
    let std_error = if exhaustive || reports.len() < 2 {
        0.0
    } else {
        let var = reports.iter().map(|r| (r.reference_bits - reference).powi(2)).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    };
    Ok(SeedAverage {
        mean: LeakageReport { strong_bits: strong, reference_bits: reference },
        std_error,
        seeds: reports.len() as u64,
        exhaustive,
    })
}
