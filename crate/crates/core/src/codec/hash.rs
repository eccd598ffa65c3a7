//! Toeplitz universal hash `F = (I, T(S))` from `F_2^{k+k'}` to `F_2^k`.
//!
//! `T(S)` is `k x k'` with `T[i][j] = S[i + k' - 1 - j]`, so it is constant
//! along diagonals and row 0 is the first `k'` seed bits reversed.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Seed of `k + k' - 1` bits selecting one member of the hash family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HashSeed {
    bits: BitVec,
}

pub fn seed_len(k: usize, k_prime: usize) -> usize {
    (k + k_prime).saturating_sub(1)
}

impl HashSeed {
    pub fn new(bits: BitVec, k: usize, k_prime: usize) -> Result<Self> {
        let want = seed_len(k, k_prime);
        if bits.len() != want {
            return Err(Error::Dimension { what: "hash seed", expected: want, got: bits.len() });
        }
        Ok(HashSeed { bits })
    }

    pub fn zero(k: usize, k_prime: usize) -> Self {
        HashSeed { bits: BitVec::zeros(seed_len(k, k_prime)) }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: usize, k_prime: usize) -> Self {
        HashSeed { bits: BitVec::random(rng, seed_len(k, k_prime)) }
    }

    /// Seed whose bits are the binary digits of `index` (bit 0 first).
    pub fn from_index(index: u64, k: usize, k_prime: usize) -> Result<Self> {
        let len = seed_len(k, k_prime);
        if len > 64 || (len < 64 && index >> len != 0) {
            return Err(Error::invalid("seed index", format!("{index} does not fit in {len} bits")));
        }
        Ok(HashSeed { bits: BitVec::from_u64(index, len) })
    }

    pub fn from_hex(text: &str, k: usize, k_prime: usize) -> Result<Self> {
        HashSeed::new(BitVec::from_hex(text, seed_len(k, k_prime))?, k, k_prime)
    }

    /// Exchange format: raw `'0'/'1'` string of length `k + k' - 1`.
    pub fn from_bit_string(text: &str, k: usize, k_prime: usize) -> Result<Self> {
        HashSeed::new(BitVec::from_bit_string(text)?, k, k_prime)
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.to_bit_string()
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzHash {
    k: usize,
    k_prime: usize,
    seed: HashSeed,
    t: BitMatrix,
    /// Row masks of `T` when `k' <= 64`, for the word-level fast path.
    masks: Option<Vec<u64>>,
}

impl ToeplitzHash {
    pub fn new(k: usize, k_prime: usize, seed: HashSeed) -> Result<Self> {
        if seed.bits.len() != seed_len(k, k_prime) {
            return Err(Error::Dimension { what: "hash seed", expected: seed_len(k, k_prime), got: seed.bits.len() });
        }
        let rows = (0..k)
            .map(|i| BitVec::from_fn(k_prime, |j| seed.bits.get(i + k_prime - 1 - j)))
            .collect();
        let t = BitMatrix::from_rows(rows, k_prime)?;
        let masks = (k_prime <= 64).then(|| t.rows().iter().map(BitVec::to_u64).collect());
        Ok(ToeplitzHash { k, k_prime, seed, t, masks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    pub fn seed(&self) -> &HashSeed {
        &self.seed
    }

    /// The `k x k'` block `T(S)`.
    pub fn toeplitz_matrix(&self) -> &BitMatrix {
        &self.t
    }

    /// The full `k x (k + k')` matrix `(I, T(S))`.
    pub fn matrix(&self) -> BitMatrix {
        BitMatrix::identity(self.k).hconcat(&self.t)
    }

    /// `T(S) l` for `l` of length `k'`.
    pub fn mix(&self, l: &BitVec) -> Result<BitVec> {
        if l.len() != self.k_prime {
            return Err(Error::Dimension { what: "hash randomness", expected: self.k_prime, got: l.len() });
        }
        Ok(self.t.mul_vec(l))
    }

    /// `F(v) = v_head xor T(S) v_tail`, head of length `k`, tail `k'`.
    pub fn apply(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.k + self.k_prime {
            return Err(Error::Dimension { what: "hash input", expected: self.k + self.k_prime, got: v.len() });
        }
        let mut out = v.slice(0, self.k);
        out.xor_assign(&self.t.mul_vec(&v.slice(self.k, self.k + self.k_prime)));
        Ok(out)
    }

    /// `T(S) l` on an integer-packed `l`. Requires `k' <= 64`.
    pub fn mix_u64(&self, l: u64) -> u64 {
        let masks = self.masks.as_ref().expect("mix_u64 needs k' <= 64");
        masks
            .iter()
            .enumerate()
            .fold(0, |acc, (i, m)| acc | (u64::from((m & l).count_ones() & 1) << i))
    }

    /// `apply` on an integer-packed input (head in the low `k` bits).
    /// Requires `k + k' <= 64`.
    pub fn apply_u64(&self, v: u64) -> u64 {
        debug_assert!(self.k + self.k_prime <= 64);
        let head_mask = if self.k == 64 { u64::MAX } else { (1u64 << self.k) - 1 };
        let tail = if self.k == 64 { 0 } else { v >> self.k };
        (v & head_mask) ^ self.mix_u64(tail)
    }
}

pub fn hash_apply(h: &ToeplitzHash, v: &BitVec) -> Result<BitVec> {
    h.apply(v)
}
