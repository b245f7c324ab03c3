//! The parallel controlled-SWAP test on two copies of a state.
//!
//! Ancilla outcome `z` (bit `i` for the test on qubit `i`) occurs with
//! probability `p(z) = 2^{-n} Σ_α (-1)^{|z ∧ α|} Tr[ρ_α²]`, so the whole
//! distribution is a Walsh–Hadamard transform of the purity vector. Each `1`
//! in `z` heralds one Bell pair shared between the copies.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::statevec::{PurityVector, SubsetMask, MAX_MASK_QUBITS};

/// Probabilities below this magnitude are treated as round-off zeros by the
/// sampler.
pub const PROB_FLOOR: f64 = 1e-12;

const SHOTS_PER_STREAM: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwapError {
    #[error("bitstring {0} has odd Hamming weight and cannot be observed")]
    OddWeight(String),
    #[error("distribution assigns probability {prob} to odd-weight string {bits}")]
    CorruptDistribution { bits: String, prob: f64 },
    #[error("no samples supplied")]
    Empty,
    #[error("at least one shot is required")]
    NoShots,
    #[error("bitstring length {got} does not match {n} qubits")]
    Length { got: usize, n: usize },
    #[error("invalid bitstring {0:?}")]
    Parse(String),
    #[error("blocks do not form a partition of {n} qubits")]
    InvalidPartition { n: usize },
}

pub type Result<T> = std::result::Result<T, SwapError>;

/// An ancilla measurement outcome. Displayed with qubit `0` leftmost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    n: usize,
    bits: u32,
}

impl Bitstring {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_MASK_QUBITS || (bits as u64) >= (1u64 << n) {
            return Err(SwapError::Length {
                got: 32 - bits.leading_zeros() as usize,
                n,
            });
        }
        Ok(Bitstring { n, bits })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn num_qubits(self) -> usize {
        self.n
    }

    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            f.write_str(if (self.bits >> q) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = SwapError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() > MAX_MASK_QUBITS {
            return Err(SwapError::Parse(s.to_string()));
        }
        let mut bits = 0u32;
        for (q, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << q,
                _ => return Err(SwapError::Parse(s.to_string())),
            }
        }
        Bitstring::new(bits, s.len())
    }
}

fn render(bits: u32, n: usize) -> String {
    Bitstring { n, bits }.to_string()
}

/// In-place unnormalized Walsh–Hadamard transform.
fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Exact ancilla outcome distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct BitstringDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl BitstringDistribution {
    pub fn from_purity_vector(pv: &PurityVector) -> Self {
        let n = pv.num_qubits();
        let mut probs = pv.values().to_vec();
        fwht(&mut probs);
        let scale = 1.0 / (1u64 << n) as f64;
        for p in &mut probs {
            *p *= scale;
        }
        BitstringDistribution { n, probs }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, z: u32) -> f64 {
        self.probs[z as usize]
    }

    /// Probability that every SWAP test passes; equals `1 - CE`.
    pub fn p_all_pass(&self) -> f64 {
        self.probs[0]
    }

    /// Mean and variance of the Hamming weight, summed over all outcomes.
    pub fn exact_weight_moments(&self) -> (f64, f64) {
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (z, &p) in self.probs.iter().enumerate() {
            let w = z.count_ones() as f64;
            m1 += w * p;
            m2 += w * w * p;
        }
        (m1, m2 - m1 * m1)
    }
}

pub fn bitstring_distribution(pv: &PurityVector) -> BitstringDistribution {
    BitstringDistribution::from_purity_vector(pv)
}

/// Draws `shots` i.i.d. outcomes. Shots are split into fixed-size blocks and
/// block `b` draws from ChaCha20 stream `b` under `seed`, so the output does
/// not depend on thread scheduling.
pub fn sample_bitstrings(
    dist: &BitstringDistribution,
    shots: usize,
    seed: u64,
) -> Result<Vec<Bitstring>> {
    if shots == 0 {
        return Err(SwapError::NoShots);
    }
    let n = dist.n;
    let mut cdf = Vec::with_capacity(dist.probs.len());
    let mut acc = 0.0;
    for (z, &p) in dist.probs.iter().enumerate() {
        let p = if p < PROB_FLOOR { 0.0 } else { p };
        if p > 0.0 && z.count_ones() % 2 == 1 {
            return Err(SwapError::CorruptDistribution {
                bits: render(z as u32, n),
                prob: p,
            });
        }
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let blocks: Vec<usize> = (0..shots.div_ceil(SHOTS_PER_STREAM)).collect();
    let drawn: Vec<Vec<u32>> = blocks
        .par_iter()
        .map(|&b| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = SHOTS_PER_STREAM.min(shots - b * SHOTS_PER_STREAM);
            (0..count)
                .map(|_| {
                    let u: f64 = rng.random::<f64>() * total;
                    let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                    idx as u32
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(shots);
    for z in drawn.into_iter().flatten() {
        if z.count_ones() % 2 == 1 {
            return Err(SwapError::OddWeight(render(z, n)));
        }
        out.push(Bitstring { n, bits: z });
    }
    Ok(out)
}

/// A labeled partition of the qubits into disjoint blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<SubsetMask>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<SubsetMask>) -> Result<Self> {
        let full = SubsetMask::full(n).bits();
        let mut seen = 0u32;
        for b in &blocks {
            if b.is_empty() || b.bits() & seen != 0 || b.bits() & !full != 0 {
                return Err(SwapError::InvalidPartition { n });
            }
            seen |= b.bits();
        }
        if seen != full {
            return Err(SwapError::InvalidPartition { n });
        }
        Ok(Partition { n, blocks })
    }

    /// `side | complement`. `side` must be a proper nonempty subset.
    pub fn bipartition(side: SubsetMask, n: usize) -> Result<Self> {
        Partition::new(n, vec![side, side.complement(n)])
    }

    pub fn blocks(&self) -> &[SubsetMask] {
        &self.blocks
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }
}

/// Tracks which partitions are ruled out by observed outcomes.
///
/// A product state across `A|B` can only produce outcomes with even weight on
/// `A`, so a partition dies as soon as some block has odd overlap with an
/// observed string. Parity against a block is linear, so it is enough to test
/// a GF(2) basis of the observations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionLedger {
    n: usize,
    observed: Vec<Bitstring>,
    /// Reduced row-echelon basis; each row has a distinct leading bit that
    /// is clear in every other row.
    basis: Vec<u32>,
}

impl ExclusionLedger {
    pub fn new(n: usize) -> Self {
        ExclusionLedger {
            n,
            observed: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn observed(&self) -> &[Bitstring] {
        &self.observed
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Returns the ledger after observing `z`. The all-zeros string carries
    /// no information and leaves the ledger untouched.
    pub fn record(&self, z: Bitstring) -> Result<Self> {
        if z.n != self.n {
            return Err(SwapError::Length { got: z.n, n: self.n });
        }
        if z.weight() % 2 == 1 {
            return Err(SwapError::OddWeight(z.to_string()));
        }
        if z.bits == 0 {
            return Ok(self.clone());
        }
        let mut next = self.clone();
        next.observed.push(z);
        let mut v = z.bits;
        for &b in &next.basis {
            let lead = 31 - b.leading_zeros();
            if (v >> lead) & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let lead = 31 - v.leading_zeros();
            for b in &mut next.basis {
                if (*b >> lead) & 1 == 1 {
                    *b ^= v;
                }
            }
            next.basis.push(v);
            next.basis.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(next)
    }

    pub fn record_all(&self, zs: &[Bitstring]) -> Result<Self> {
        zs.iter().try_fold(self.clone(), |l, &z| l.record(z))
    }

    /// Unordered bipartitions still consistent with the data, counting the
    /// trivial split `∅ | all`: `2^{n-1-rank}`.
    pub fn surviving_bipartitions(&self) -> u64 {
        1u64 << (self.n - 1 - self.rank())
    }

    fn odd_overlap(&self, block: u32) -> bool {
        self.basis.iter().any(|&b| (b & block).count_ones() % 2 == 1)
    }

    pub fn is_partition_excluded(&self, p: &Partition) -> bool {
        p.blocks().iter().any(|b| self.odd_overlap(b.bits()))
    }

    /// Excluded nontrivial bipartitions, each named by its side containing
    /// qubit 0, in increasing mask order.
    pub fn excluded_bipartitions(&self) -> Vec<SubsetMask> {
        let full = SubsetMask::full(self.n).bits();
        (0..full)
            .filter(|a| a & 1 == 1)
            .filter(|&a| self.odd_overlap(a))
            .map(|a| SubsetMask::new(a, self.n).expect("mask below 2^n"))
            .collect()
    }
}

/// Expected number and variance of Bell pairs per run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellPairStats {
    pub mean: f64,
    pub variance: f64,
}

/// With `S = Σ_i Tr[ρ_i²]`:
/// mean `(n - S)/2`, variance `n/4 - S²/4 + ½ Σ_{i<j} Tr[ρ_ij²]`.
pub fn bell_pair_stats(pv: &PurityVector) -> BellPairStats {
    let n = pv.num_qubits();
    let vals = pv.values();
    let s = pv.single_qubit_sum();
    let mut pairs = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            pairs += vals[(1 << i) | (1 << j)];
        }
    }
    BellPairStats {
        mean: 0.5 * (n as f64 - s),
        variance: n as f64 / 4.0 - s * s / 4.0 + 0.5 * pairs,
    }
}

/// Sample mean and unbiased sample variance of the Bell-pair count `w(z)`.
/// A single sample has variance 0.
pub fn empirical_bell_pairs(samples: &[Bitstring]) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(SwapError::Empty);
    }
    let k = samples.len() as f64;
    let mean = samples.iter().map(|z| z.weight() as f64).sum::<f64>() / k;
    if samples.len() == 1 {
        return Ok((mean, 0.0));
    }
    let ss: f64 = samples
        .iter()
        .map(|z| (z.weight() as f64 - mean).powi(2))
        .sum();
    Ok((mean, ss / (k - 1.0)))
}
