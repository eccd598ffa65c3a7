//! Wiretap coset code: a Toeplitz universal hash wrapped around an inner
//! error-correcting code, plus an exhaustive small-instance leakage oracle.

mod hash;
mod inner;
mod leakage;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

pub use hash::{hash_apply, seed_len, HashSeed, ToeplitzHash};
pub use inner::{IdentityCode, InnerCode, LinearCode};
pub use leakage::{
    exact_leakage, hard_decision_bsc, seed_averaged_leakage, LeakageReport, SeedAverage, ENUMERATION_LIMIT,
    EXHAUSTIVE_SEED_BITS, MIN_SAMPLED_SEEDS,
};

/// Encoder/decoder pair `m -> phi_e(m xor T l, l)` and
/// `y -> head(phi_d y) xor T tail(phi_d y)`.
#[derive(Debug, Clone)]
pub struct CosetCode {
    inner: Arc<dyn InnerCode>,
    hash: ToeplitzHash,
}

impl CosetCode {
    pub fn new(inner: Arc<dyn InnerCode>, hash: ToeplitzHash) -> Result<Self> {
        let want = hash.k() + hash.k_prime();
        if inner.dimension() != want {
            return Err(Error::Dimension { what: "inner code dimension (k + k')", expected: want, got: inner.dimension() });
        }
        Ok(CosetCode { inner, hash })
    }

    pub fn k(&self) -> usize {
        self.hash.k()
    }

    pub fn k_prime(&self) -> usize {
        self.hash.k_prime()
    }

    pub fn n(&self) -> usize {
        self.inner.length()
    }

    pub fn hash(&self) -> &ToeplitzHash {
        &self.hash
    }

    pub fn inner(&self) -> &Arc<dyn InnerCode> {
        &self.inner
    }

    /// Same inner code, different seed.
    pub fn with_seed(&self, seed: HashSeed) -> Result<Self> {
        CosetCode::new(self.inner.clone(), ToeplitzHash::new(self.k(), self.k_prime(), seed)?)
    }

    /// The inner-code input `(m xor T l, l)`.
    pub fn precode(&self, m: &BitVec, l: &BitVec) -> Result<BitVec> {
        if m.len() != self.k() {
            return Err(Error::Dimension { what: "message", expected: self.k(), got: m.len() });
        }
        Ok(m.xor(&self.hash.mix(l)?).concat(l))
    }

    pub fn encode(&self, m: &BitVec, l: &BitVec) -> Result<BitVec> {
        self.inner.encode(&self.precode(m, l)?)
    }

    pub fn decode(&self, y: &BitVec) -> Result<BitVec> {
        if y.len() != self.n() {
            return Err(Error::Dimension { what: "received word", expected: self.n(), got: y.len() });
        }
        self.hash.apply(&self.inner.decode(y)?)
    }
}

pub fn wiretap_encode(code: &CosetCode, m: &BitVec, l: &BitVec) -> Result<BitVec> {
    code.encode(m, l)
}

pub fn wiretap_decode(code: &CosetCode, y: &BitVec) -> Result<BitVec> {
    code.decode(y)
}
