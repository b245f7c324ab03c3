//! State representations and the purity engine.
//!
//! Everything here follows the little-endian convention: qubit `0` is the
//! least-significant bit of a basis index, so amplitude `amps[i]` belongs to
//! the basis state whose qubit `q` reads `(i >> q) & 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{binomial, q_int, q_pow, Q};

/// Tolerance on normalization, Hermiticity and unit trace.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance used for equality assertions on derived real quantities.
pub const EQ_TOL: f64 = 1e-9;
/// Most negative eigenvalue accepted for a density matrix.
pub const EIGEN_TOL: f64 = 1e-9;

/// Hard upper limit imposed by the `u32` subset masks.
pub const MAX_MASK_QUBITS: usize = 31;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("a state needs at least one qubit")]
    ZeroQubits,
    #[error("{n} qubits exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("state is not normalized: squared norm {norm}")]
    NotNormalized { norm: f64 },
    #[error("matrix is not Hermitian (max deviation {deviation})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("density matrix has eigenvalue {eigenvalue} below zero")]
    NotPositive { eigenvalue: f64 },
    #[error("subset mask {bits:#b} is out of range for {n} qubits")]
    MaskOutOfRange { bits: u32, n: usize },
    #[error("qubit {qubit} is out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("{n} qubits exceeds the configured cap of {cap} for {kind} states")]
    CapExceeded { n: usize, cap: usize, kind: &'static str },
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },
    #[error("malformed state file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, StateError>;

/// A subset of qubit labels; bit `i` set means qubit `i` is in the subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        if n > MAX_MASK_QUBITS || (n < 32 && (bits as u64) >= (1u64 << n)) {
            return Err(StateError::MaskOutOfRange { bits, n });
        }
        Ok(SubsetMask(bits))
    }

    pub fn empty() -> Self {
        SubsetMask(0)
    }

    pub fn full(n: usize) -> Self {
        SubsetMask(((1u64 << n) - 1) as u32)
    }

    pub fn from_qubits(qubits: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &q in qubits {
            if q >= n {
                return Err(StateError::QubitOutOfRange { qubit: q, n });
            }
            bits |= 1 << q;
        }
        Ok(SubsetMask(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, qubit: usize) -> bool {
        qubit < 32 && (self.0 >> qubit) & 1 == 1
    }

    pub fn complement(self, n: usize) -> Self {
        SubsetMask(!self.0 & Self::full(n).0)
    }

    pub fn qubits(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |q| (self.0 >> q) & 1 == 1)
    }
}

/// Scatters the low bits of `value` onto the set bits of `mask`.
fn deposit(mut value: usize, mask: u32) -> usize {
    let mut out = 0usize;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if value & 1 == 1 {
            out |= low as usize;
        }
        value >>= 1;
        m &= m - 1;
    }
    out
}

fn offsets(mask: u32) -> Vec<usize> {
    (0..1usize << mask.count_ones())
        .map(|v| deposit(v, mask))
        .collect()
}

/// Configurable limits on exponential-cost computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCaps {
    pub max_pure_qubits: usize,
    pub max_mixed_qubits: usize,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            max_pure_qubits: 14,
            max_mixed_qubits: 8,
        }
    }
}

/// The `2^n` subset purities `Tr[ρ_α²]`, indexed by subset mask.
#[derive(Clone, Debug, PartialEq)]
pub struct PurityVector {
    n: usize,
    vals: Vec<f64>,
}

impl PurityVector {
    pub fn new(n: usize, vals: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(StateError::ZeroQubits);
        }
        if n > MAX_MASK_QUBITS {
            return Err(StateError::TooLarge {
                n,
                max: MAX_MASK_QUBITS,
            });
        }
        if vals.len() != 1 << n {
            return Err(StateError::Length {
                expected: 1 << n,
                got: vals.len(),
            });
        }
        Ok(PurityVector { n, vals })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    pub fn get(&self, alpha: SubsetMask) -> f64 {
        self.vals[alpha.bits() as usize]
    }

    /// `1 - 2^{-n} Σ_α Tr[ρ_α²]`.
    pub fn concentratable_entanglement(&self) -> f64 {
        let total: f64 = self.vals.iter().sum();
        1.0 - total / (1u64 << self.n) as f64
    }

    /// `Σ_i Tr[ρ_i²]` over single qubits.
    pub fn single_qubit_sum(&self) -> f64 {
        (0..self.n).map(|i| self.vals[1 << i]).sum()
    }
}

/// Anything whose subset purities can be evaluated.
pub trait QuantumState {
    fn num_qubits(&self) -> usize;

    /// `Tr[ρ_α²]` from the explicit reduced state on `alpha`.
    fn purity(&self, alpha: SubsetMask) -> Result<f64>;

    fn purity_vector_with_caps(&self, caps: &ResourceCaps) -> Result<PurityVector>;

    fn purity_vector(&self) -> Result<PurityVector> {
        self.purity_vector_with_caps(&ResourceCaps::default())
    }

    fn concentratable_entanglement(&self) -> Result<f64> {
        Ok(self.purity_vector()?.concentratable_entanglement())
    }
}

/// A normalized `n`-qubit state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Validates length and normalization. Unnormalized input is rejected.
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(StateError::ZeroQubits);
        }
        if n > MAX_MASK_QUBITS {
            return Err(StateError::TooLarge {
                n,
                max: MAX_MASK_QUBITS,
            });
        }
        if amps.len() != 1 << n {
            return Err(StateError::Length {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL || !norm.is_finite() {
            return Err(StateError::NotNormalized { norm });
        }
        Ok(PureState { n, amps })
    }

    /// Normalizes `amps` first; for constructions where the scale is known
    /// to be arbitrary (random sampling, superpositions built by hand).
    pub fn from_unnormalized(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(StateError::NotNormalized { norm });
        }
        for a in &mut amps {
            *a /= norm;
        }
        PureState::new(n, amps)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(StateError::ZeroQubits);
        }
        if n > MAX_MASK_QUBITS {
            return Err(StateError::TooLarge {
                n,
                max: MAX_MASK_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        if index >= amps.len() {
            return Err(StateError::Length {
                expected: amps.len(),
                got: index,
            });
        }
        amps[index] = Complex64::new(1.0, 0.0);
        PureState::new(n, amps)
    }

    pub fn zero(n: usize) -> Result<Self> {
        PureState::basis(n, 0)
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n: usize) -> Result<Self> {
        let mut s = PureState::zero(n)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        s.amps[0] = Complex64::new(h, 0.0);
        let last = s.amps.len() - 1;
        s.amps[last] = Complex64::new(h, 0.0);
        Ok(s)
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        PureState::ghz(2).expect("two qubits is valid")
    }

    /// `|a_0⟩ ⊗ |a_1⟩ ⊗ …` with factor `i` on qubit `i`.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<Self> {
        let mut state: Option<PureState> = None;
        for f in factors {
            let q = PureState::from_unnormalized(1, f.to_vec())?;
            state = Some(match state {
                None => q,
                Some(s) => s.tensor(&q)?,
            });
        }
        state.ok_or(StateError::ZeroQubits)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `self ⊗ other` with `self` on qubits `0..k` and `other` on `k..k+m`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let n = self.n + other.n;
        if n > MAX_MASK_QUBITS {
            return Err(StateError::TooLarge {
                n,
                max: MAX_MASK_QUBITS,
            });
        }
        let mut amps = Vec::with_capacity(1 << n);
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState { n, amps })
    }

    /// Applies a 2×2 unitary `u` (row-major) to `qubit`.
    pub fn apply_single_qubit(&mut self, qubit: usize, u: &[[Complex64; 2]; 2]) -> Result<()> {
        if qubit >= self.n {
            return Err(StateError::QubitOutOfRange { qubit, n: self.n });
        }
        let bit = 1usize << qubit;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_hadamard(&mut self, qubit: usize) -> Result<()> {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        self.apply_single_qubit(qubit, &[[h, h], [h, -h]])
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        for q in [a, b] {
            if q >= self.n {
                return Err(StateError::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(StateError::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.amps.len();
        let mat = DMatrix::from_fn(dim, dim, |i, j| self.amps[i] * self.amps[j].conj());
        DensityMatrix { n: self.n, mat }
    }

    /// Purity of the reduced state on `alpha`, built by tracing out the
    /// complement: `ρ_α[a,b] = Σ_c ψ[a,c] ψ*[b,c]`.
    fn reduced_purity(&self, alpha: u32) -> f64 {
        let traced = !alpha & SubsetMask::full(self.n).bits();
        let keep = offsets(alpha);
        let rest = offsets(traced);
        let rows: Vec<Vec<Complex64>> = keep
            .iter()
            .map(|&a| rest.iter().map(|&c| self.amps[a + c]).collect())
            .collect();
        let mut total = 0.0;
        for a in 0..rows.len() {
            let diag: f64 = rows[a].iter().map(|x| x.norm_sqr()).sum();
            total += diag * diag;
            for b in (a + 1)..rows.len() {
                let off: Complex64 = rows[a]
                    .iter()
                    .zip(&rows[b])
                    .map(|(x, y)| x * y.conj())
                    .sum();
                total += 2.0 * off.norm_sqr();
            }
        }
        total
    }
}

impl QuantumState for PureState {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn purity(&self, alpha: SubsetMask) -> Result<f64> {
        let alpha = SubsetMask::new(alpha.bits(), self.n)?;
        Ok(self.reduced_purity(alpha.bits()))
    }

    /// Only the smaller side of each complementary pair is computed; the
    /// other is filled in from `Tr[ρ_α²] = Tr[ρ_ᾱ²]`.
    fn purity_vector_with_caps(&self, caps: &ResourceCaps) -> Result<PurityVector> {
        if self.n > caps.max_pure_qubits {
            return Err(StateError::CapExceeded {
                n: self.n,
                cap: caps.max_pure_qubits,
                kind: "pure",
            });
        }
        let full = SubsetMask::full(self.n).bits();
        let reps: Vec<u32> = (0..=full)
            .filter(|&a| {
                let c = !a & full;
                let (ka, kc) = (a.count_ones(), c.count_ones());
                ka < kc || (ka == kc && a <= c)
            })
            .collect();
        let computed: Vec<f64> = reps.par_iter().map(|&a| self.reduced_purity(a)).collect();
        let mut vals = vec![0.0; 1 << self.n];
        for (&a, &p) in reps.iter().zip(&computed) {
            vals[a as usize] = p;
            vals[(!a & full) as usize] = p;
        }
        PurityVector::new(self.n, vals)
    }
}

/// A validated `n`-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks Hermiticity and unit trace to 1e-10 and eigenvalues to -1e-9.
    pub fn new(n: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(StateError::ZeroQubits);
        }
        if n > MAX_MASK_QUBITS {
            return Err(StateError::TooLarge {
                n,
                max: MAX_MASK_QUBITS,
            });
        }
        let dim = 1usize << n;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(StateError::Length {
                expected: dim * dim,
                got: mat.nrows() * mat.ncols(),
            });
        }
        let mut deviation = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                deviation = deviation.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
            }
        }
        if deviation > NORM_TOL {
            return Err(StateError::NotHermitian { deviation });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > NORM_TOL || trace.im.abs() > NORM_TOL {
            return Err(StateError::BadTrace { trace: trace.re });
        }
        let eig = mat.clone().symmetric_eigenvalues();
        let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -EIGEN_TOL {
            return Err(StateError::NotPositive { eigenvalue: min });
        }
        Ok(DensityMatrix { n, mat })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// `Tr[ρ²]`.
    pub fn total_purity(&self) -> f64 {
        self.mat.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Trace norm `‖ρ - σ‖₁`.
    pub fn trace_norm_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(StateError::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let diff = &self.mat - &other.mat;
        Ok(diff.symmetric_eigenvalues().iter().map(|e| e.abs()).sum())
    }

    /// Convex combination `p ρ + (1-p) σ`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
        if self.n != other.n {
            return Err(StateError::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let p = Complex64::new(p, 0.0);
        let q = Complex64::new(1.0, 0.0) - p;
        DensityMatrix::new(self.n, self.mat.map(|x| x * p) + other.mat.map(|x| x * q))
    }

    pub fn maximally_mixed(n: usize) -> Result<DensityMatrix> {
        if n == 0 || n > MAX_MASK_QUBITS {
            return Err(StateError::ZeroQubits);
        }
        let dim = 1usize << n;
        let v = Complex64::new(1.0 / dim as f64, 0.0);
        DensityMatrix::new(n, DMatrix::from_diagonal_element(dim, dim, v))
    }

    fn reduced_purity(&self, alpha: u32) -> f64 {
        let traced = !alpha & SubsetMask::full(self.n).bits();
        let keep = offsets(alpha);
        let rest = offsets(traced);
        let mut total = 0.0;
        for &a in &keep {
            for &b in &keep {
                let entry: Complex64 = rest.iter().map(|&c| self.mat[(a + c, b + c)]).sum();
                total += entry.norm_sqr();
            }
        }
        total
    }
}

impl QuantumState for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn purity(&self, alpha: SubsetMask) -> Result<f64> {
        let alpha = SubsetMask::new(alpha.bits(), self.n)?;
        Ok(self.reduced_purity(alpha.bits()))
    }

    fn purity_vector_with_caps(&self, caps: &ResourceCaps) -> Result<PurityVector> {
        if self.n > caps.max_mixed_qubits {
            return Err(StateError::CapExceeded {
                n: self.n,
                cap: caps.max_mixed_qubits,
                kind: "mixed",
            });
        }
        let vals: Vec<f64> = (0..1u32 << self.n)
            .into_par_iter()
            .map(|a| self.reduced_purity(a))
            .collect();
        PurityVector::new(self.n, vals)
    }
}

/// Either kind of state, as read from a state file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState for AnyState {
    fn num_qubits(&self) -> usize {
        match self {
            AnyState::Pure(s) => s.num_qubits(),
            AnyState::Mixed(s) => s.num_qubits(),
        }
    }

    fn purity(&self, alpha: SubsetMask) -> Result<f64> {
        match self {
            AnyState::Pure(s) => s.purity(alpha),
            AnyState::Mixed(s) => s.purity(alpha),
        }
    }

    fn purity_vector_with_caps(&self, caps: &ResourceCaps) -> Result<PurityVector> {
        match self {
            AnyState::Pure(s) => s.purity_vector_with_caps(caps),
            AnyState::Mixed(s) => s.purity_vector_with_caps(caps),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PureStateFile {
    n: usize,
    amps: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixFile {
    n: usize,
    mat: Vec<Vec<[f64; 2]>>,
}

impl PureState {
    /// `{ "n": int, "amps": [[re, im], ...] }`.
    pub fn to_json(&self) -> String {
        let file = PureStateFile {
            n: self.n,
            amps: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        };
        serde_json::to_string(&file).expect("plain data serializes")
    }
}

impl DensityMatrix {
    /// `{ "n": int, "mat": [[[re, im], ...], ...] }`, row-major.
    pub fn to_json(&self) -> String {
        let dim = self.mat.nrows();
        let file = DensityMatrixFile {
            n: self.n,
            mat: (0..dim)
                .map(|i| (0..dim).map(|j| [self.mat[(i, j)].re, self.mat[(i, j)].im]).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("plain data serializes")
    }
}

/// Parses a state file; an `amps` key selects a pure state, `mat` a density
/// matrix.
pub fn parse_state_json(text: &str) -> Result<AnyState> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| StateError::Parse(e.to_string()))?;
    if value.get("amps").is_some() {
        let f: PureStateFile =
            serde_json::from_value(value).map_err(|e| StateError::Parse(e.to_string()))?;
        let amps = f.amps.iter().map(|a| Complex64::new(a[0], a[1])).collect();
        Ok(AnyState::Pure(PureState::new(f.n, amps)?))
    } else if value.get("mat").is_some() {
        let f: DensityMatrixFile =
            serde_json::from_value(value).map_err(|e| StateError::Parse(e.to_string()))?;
        if f.n == 0 || f.n > MAX_MASK_QUBITS {
            return Err(StateError::ZeroQubits);
        }
        let dim = 1usize << f.n;
        if f.mat.len() != dim || f.mat.iter().any(|r| r.len() != dim) {
            return Err(StateError::Length {
                expected: dim * dim,
                got: f.mat.iter().map(|r| r.len()).sum(),
            });
        }
        let mat = DMatrix::from_fn(dim, dim, |i, j| Complex64::new(f.mat[i][j][0], f.mat[i][j][1]));
        Ok(AnyState::Mixed(DensityMatrix::new(f.n, mat)?))
    } else {
        Err(StateError::Parse("expected an \"amps\" or \"mat\" field".into()))
    }
}

/// CE of a state whose every marginal on at most half the qubits is
/// maximally mixed: `1 - 2^{-n} Σ_k C(n,k) 2^{-min(k,n-k)}`.
pub fn ame_bound_exact(n: usize) -> Q {
    let n32 = n as u32;
    let mut sum = q_int(0);
    for k in 0..=n32 {
        sum += Q::from_integer(binomial(n32, k)) * q_pow(2, -(k.min(n32 - k) as i32));
    }
    q_int(1) - sum * q_pow(2, -(n32 as i32))
}

pub fn ce_upper_bound_ame(n: usize) -> f64 {
    crate::rational::to_f64(&ame_bound_exact(n))
}

/// `1 - (3/4)^n`.
pub fn ce_asymptotic_bound_exact(n: usize) -> Q {
    q_int(1) - q_pow(3, n as i32) * q_pow(4, -(n as i32))
}

pub fn ce_asymptotic_bound(n: usize) -> f64 {
    1.0 - 0.75f64.powi(n as i32)
}
