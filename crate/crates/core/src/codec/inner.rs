//! Inner error-correcting codes `phi_e`, `phi_d` over F_2.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Largest redundancy `n - k` for which a full coset-leader table is built.
const SYNDROME_TABLE_MAX_REDUNDANCY: usize = 20;

pub trait InnerCode: Send + Sync + fmt::Debug {
    /// Message length `k + k'`.
    fn dimension(&self) -> usize;
    /// Block length `n`.
    fn length(&self) -> usize;
    fn encode(&self, u: &BitVec) -> Result<BitVec>;
    fn decode(&self, y: &BitVec) -> Result<BitVec>;
}

/// `phi_e = phi_d = id`: the noiseless main-channel regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityCode {
    len: usize,
}

impl IdentityCode {
    pub fn new(len: usize) -> Self {
        IdentityCode { len }
    }
}

impl InnerCode for IdentityCode {
    fn dimension(&self) -> usize {
        self.len
    }

    fn length(&self) -> usize {
        self.len
    }

    fn encode(&self, u: &BitVec) -> Result<BitVec> {
        check_len("inner message", self.len, u)?;
        Ok(u.clone())
    }

    fn decode(&self, y: &BitVec) -> Result<BitVec> {
        check_len("received word", self.len, y)?;
        Ok(y.clone())
    }
}

fn check_len(what: &'static str, expected: usize, v: &BitVec) -> Result<()> {
    if v.len() != expected {
        return Err(Error::Dimension { what, expected, got: v.len() });
    }
    Ok(())
}

/// Binary linear code `c = u G` with syndrome decoding.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: BitMatrix,
    parity: BitMatrix,
    /// Columns of `G` forming an invertible `k x k` submatrix.
    info_set: Vec<usize>,
    /// Inverse of `G` restricted to `info_set`: `u = c[info_set] G_I^{-1}`.
    info_inverse: BitMatrix,
    /// Minimum-weight error for each syndrome, when `n - k` is small.
    leaders: Option<HashMap<BitVec, BitVec>>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode[{}, {}]", self.dimension(), self.length())
    }
}

fn invert(m: &BitMatrix) -> Option<BitMatrix> {
    let n = m.n_rows();
    let mut aug = m.hconcat(&BitMatrix::identity(n));
    let pivots = aug.rref();
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    let rows = aug.rows().iter().map(|r| r.slice(n, 2 * n)).collect();
    BitMatrix::from_rows(rows, n).ok()
}

impl LinearCode {
    /// Code from a full-row-rank `k x n` generator; the parity-check matrix
    /// is derived from its null space.
    pub fn from_generator(generator: BitMatrix) -> Result<Self> {
        let (k, n) = (generator.n_rows(), generator.n_cols());
        let mut r = generator.clone();
        let pivots = r.rref();
        if pivots.len() != k {
            return Err(Error::invalid("generator matrix", format!("rank {} < {} rows", pivots.len(), k)));
        }
        // Null space: one check per non-pivot column f, h[f] = 1, h[p_i] = R[i][f].
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let checks = free
            .iter()
            .map(|&f| {
                let mut h = BitVec::zeros(n);
                h.set(f, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if r.get(i, f) {
                        h.set(p, true);
                    }
                }
                h
            })
            .collect();
        let parity = BitMatrix::from_rows(checks, n)?;
        LinearCode::assemble(generator, parity, pivots)
    }

    /// Code from externally supplied generator and parity-check matrices.
    pub fn from_matrices(generator: BitMatrix, parity: BitMatrix) -> Result<Self> {
        let (k, n) = (generator.n_rows(), generator.n_cols());
        if parity.n_cols() != n {
            return Err(Error::Dimension { what: "parity-check columns", expected: n, got: parity.n_cols() });
        }
        let mut r = generator.clone();
        let pivots = r.rref();
        if pivots.len() != k {
            return Err(Error::invalid("generator matrix", format!("rank {} < {} rows", pivots.len(), k)));
        }
        if parity.rank() != n - k {
            return Err(Error::invalid("parity-check matrix", format!("rank must be n - k = {}", n - k)));
        }
        if generator.rows().iter().any(|g| !parity.mul_vec(g).is_zero()) {
            return Err(Error::invalid("parity-check matrix", "G H^T != 0"));
        }
        LinearCode::assemble(generator, parity, pivots)
    }

    fn assemble(generator: BitMatrix, parity: BitMatrix, info_set: Vec<usize>) -> Result<Self> {
        let k = generator.n_rows();
        let restricted = BitMatrix::from_rows(
            generator.rows().iter().map(|row| BitVec::from_fn(k, |j| row.get(info_set[j]))).collect(),
            k,
        )?;
        let info_inverse = invert(&restricted).ok_or_else(|| Error::invalid("generator matrix", "singular information set"))?;
        let leaders = (parity.n_rows() <= SYNDROME_TABLE_MAX_REDUNDANCY).then(|| coset_leaders(&parity));
        Ok(LinearCode { generator, parity, info_set, info_inverse, leaders })
    }

    /// Systematic Hamming(7,4), minimum distance 3.
    pub fn hamming74() -> Self {
        let rows = ["1000110", "0100101", "0010011", "0001111"]
            .iter()
            .map(|r| BitVec::from_bit_string(r).expect("static bit string"))
            .collect();
        LinearCode::from_generator(BitMatrix::from_rows(rows, 7).expect("static matrix")).expect("static code")
    }

    /// `blocks` independent copies side by side (block-diagonal generator).
    pub fn repeated(&self, blocks: usize) -> Result<Self> {
        let (k, n) = (self.dimension(), self.length());
        let mut rows = Vec::with_capacity(k * blocks);
        for b in 0..blocks {
            for g in self.generator.rows() {
                rows.push(BitVec::from_fn(n * blocks, |c| c / n == b && g.get(c % n)));
            }
        }
        LinearCode::from_generator(BitMatrix::from_rows(rows, n * blocks)?)
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity
    }

    pub fn syndrome(&self, y: &BitVec) -> BitVec {
        self.parity.mul_vec(y)
    }

    /// Descriptor text: a `k n` line, then `k` generator rows as hex
    /// integers with column 0 in the least significant bit. Blank lines and
    /// `#` comments are ignored.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::invalid("code descriptor", "missing `k n` header"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::invalid("code descriptor", format!("bad dimension {t:?}"))))
            .collect::<Result<_>>()?;
        let [k, n] = dims[..] else {
            return Err(Error::invalid("code descriptor", "header must be `k n`"));
        };
        if k > n || n == 0 {
            return Err(Error::invalid("code descriptor", format!("need 0 < k <= n, got k={k} n={n}")));
        }
        let rows: Vec<BitVec> = lines.map(|l| BitVec::from_hex(l, n)).collect::<Result<_>>()?;
        if rows.len() != k {
            return Err(Error::Dimension { what: "descriptor generator rows", expected: k, got: rows.len() });
        }
        LinearCode::from_generator(BitMatrix::from_rows(rows, n)?)
    }

    pub fn to_descriptor(&self) -> String {
        let mut s = format!("{} {}\n", self.dimension(), self.length());
        for row in self.generator.rows() {
            s.push_str(&row.to_hex());
            s.push('\n');
        }
        s
    }
}

/// Lowest-weight error pattern for every syndrome, enumerating patterns by
/// increasing weight until all `2^(n-k)` cosets are covered.
fn coset_leaders(parity: &BitMatrix) -> HashMap<BitVec, BitVec> {
    let n = parity.n_cols();
    let total = 1usize << parity.rank();
    let mut table = HashMap::with_capacity(total);
    table.insert(BitVec::zeros(parity.n_rows()), BitVec::zeros(n));
    let mut weight = 1;
    while table.len() < total && weight <= n {
        let mut combo: Vec<usize> = (0..weight).collect();
        loop {
            let mut e = BitVec::zeros(n);
            for &c in &combo {
                e.set(c, true);
            }
            table.entry(parity.mul_vec(&e)).or_insert(e);
            if table.len() == total {
                break;
            }
            // next combination in lexicographic order
            let mut i = weight;
            while i > 0 && combo[i - 1] == n - weight + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..weight {
                combo[j] = combo[j - 1] + 1;
            }
        }
        weight += 1;
    }
    table
}

impl InnerCode for LinearCode {
    fn dimension(&self) -> usize {
        self.generator.n_rows()
    }

    fn length(&self) -> usize {
        self.generator.n_cols()
    }

    fn encode(&self, u: &BitVec) -> Result<BitVec> {
        check_len("inner message", self.dimension(), u)?;
        Ok(self.generator.left_mul(u))
    }

    fn decode(&self, y: &BitVec) -> Result<BitVec> {
        check_len("received word", self.length(), y)?;
        let syndrome = self.syndrome(y);
        let codeword = if syndrome.is_zero() {
            y.clone()
        } else {
            let leader = self
                .leaders
                .as_ref()
                .and_then(|t| t.get(&syndrome))
                .ok_or_else(|| Error::Decode(format!("no coset leader for syndrome {}", syndrome.to_bit_string())))?;
            y.xor(leader)
        };
        let info = BitVec::from_fn(self.dimension(), |j| codeword.get(self.info_set[j]));
        Ok(self.info_inverse.left_mul(&info))
    }
}
