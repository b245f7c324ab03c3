//! Haar-random pure states and the first two moments of their CE.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::hierarchy::{gme_threshold, CmaxTable, HierarchyError};
use crate::rational::{q_int, q_pow, to_f64, Q};
use crate::statevec::{PureState, QuantumState, StateError};

/// Fewest samples accepted by [`haar_experiment`].
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HaarError {
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

pub type Result<T> = std::result::Result<T, HaarError>;

fn sample_from(n: usize, rng: &mut ChaCha20Rng) -> std::result::Result<PureState, StateError> {
    if n == 0 {
        return Err(StateError::ZeroQubits);
    }
    if n > crate::statevec::MAX_MASK_QUBITS {
        return Err(StateError::TooLarge {
            n,
            max: crate::statevec::MAX_MASK_QUBITS,
        });
    }
    let amps = (0..1usize << n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    PureState::from_unnormalized(n, amps)
}

/// Normalized vector of i.i.d. complex Gaussians, drawn from ChaCha20
/// seeded with `seed`.
pub fn sample_haar_state(n: usize, seed: u64) -> Result<PureState> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(sample_from(n, &mut rng)?)
}

/// Sample `index` of a batch: stream `index` of the generator seeded with
/// `seed`.
pub fn sample_haar_state_indexed(n: usize, seed: u64, index: u64) -> Result<PureState> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    Ok(sample_from(n, &mut rng)?)
}

/// Exact Haar mean and variance of CE:
///
/// ```text
/// mean = 1 - 2·3^n / (4^n + 2^n)
/// var  = 3^n 4^{1-n} (2^n - 2·3^n + 4^n) / ((1 + 2^n)² (6 + 5·2^n + 4^n))
/// ```
pub fn haar_moments_exact(n: usize) -> (Q, Q) {
    let e = n as i32;
    let (p2, p3, p4) = (q_pow(2, e), q_pow(3, e), q_pow(4, e));
    let mean = q_int(1) - q_int(2) * &p3 / (&p4 + &p2);
    let num = &p3 * q_pow(4, 1 - e) * (&p2 - q_int(2) * &p3 + &p4);
    let one_p2 = q_int(1) + &p2;
    let den = &one_p2 * &one_p2 * (q_int(6) + q_int(5) * &p2 + &p4);
    (mean, num / den)
}

pub fn haar_moments(n: usize) -> (f64, f64) {
    let (m, v) = haar_moments_exact(n);
    (to_f64(&m), to_f64(&v))
}

/// Equal-width histogram over `[lo, hi]`; the last bin is closed.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Self {
        let bins = bins.max(1);
        let mut counts = vec![0; bins];
        let width = (hi - lo) / bins as f64;
        for &v in values {
            if v < lo || v > hi {
                continue;
            }
            let b = (((v - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        Histogram { lo, hi, counts }
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        let width = (self.hi - self.lo) / self.counts.len() as f64;
        self.lo + (i as f64 + 0.5) * width
    }

    /// `bin,count` lines with a header, bins named by their centers.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("{:.6},{}\n", self.bin_center(i), c));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HaarStats {
    pub n: usize,
    pub samples: usize,
    pub mean_closed: f64,
    pub var_closed: f64,
    pub mean_emp: f64,
    /// Unbiased sample variance.
    pub var_emp: f64,
    /// `ζ(n)`, when `n ≥ 2`.
    pub threshold: Option<f64>,
    /// Fraction of samples with CE at or below `ζ(n)`.
    pub frac_below_threshold: Option<f64>,
    /// Fraction of samples whose CE exceeds that of GHZ_n, `1/2 - 2^{-n}`.
    pub frac_above_ghz: f64,
    pub ce_values: Vec<f64>,
}

impl HaarStats {
    pub fn standard_error(&self) -> f64 {
        (self.var_closed / self.samples as f64).sqrt()
    }

    pub fn histogram(&self, bins: usize) -> Histogram {
        Histogram::new(&self.ce_values, 0.0, 1.0, bins)
    }
}

/// Draws `samples` states (sample `i` from stream `i`) and summarizes
/// their CE. `cmax` must cover `1..n` for the threshold fraction.
pub fn haar_experiment(n: usize, samples: usize, seed: u64, cmax: &CmaxTable) -> Result<HaarStats> {
    if samples < MIN_SAMPLES {
        return Err(HaarError::TooFewSamples(samples));
    }
    let ce_values = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = sample_haar_state_indexed(n, seed, i)?;
            Ok(s.concentratable_entanglement()?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let k = samples as f64;
    let mean_emp = ce_values.iter().sum::<f64>() / k;
    let var_emp = ce_values.iter().map(|c| (c - mean_emp).powi(2)).sum::<f64>() / (k - 1.0);
    let (mean_closed, var_closed) = haar_moments(n);
    let threshold = if n >= 2 {
        Some(to_f64(&gme_threshold(n, cmax)?))
    } else {
        None
    };
    let frac_below_threshold =
        threshold.map(|t| ce_values.iter().filter(|&&c| c <= t).count() as f64 / k);
    let ghz = 0.5 - 0.5f64.powi(n as i32);
    let frac_above_ghz = ce_values.iter().filter(|&&c| c > ghz).count() as f64 / k;
    Ok(HaarStats {
        n,
        samples,
        mean_closed,
        var_closed,
        mean_emp,
        var_emp,
        threshold,
        frac_below_threshold,
        frac_above_ghz,
        ce_values,
    })
}
