//! CE ceilings for product structures and certification of measured values.
//!
//! A state that factors as `ψ_1 ⊗ … ⊗ ψ_m` with block sizes `b_1, …, b_m` has
//! `1 - CE = Π (1 - CE(ψ_i))`, so its CE is at most
//! `ζ*(b) = 1 - Π (1 - C*(b_i))`. A measured CE above `ζ*(b)` rules out every
//! labeling of that structure.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::haar::haar_moments_exact;
use crate::lp::{solve_cmax_lp, LpError};
use crate::rational::{binomial, from_f64, q_int, q_pow, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HierarchyError {
    #[error("no C* entry for {0} qubits")]
    Missing(usize),
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("CE value {0} is outside [0, 1]")]
    InvalidCe(f64),
    #[error("purity {0} is outside [0, 1]")]
    InvalidPurity(f64),
    #[error("cut size {k} is invalid for {n} qubits")]
    InvalidCut { n: usize, k: usize },
    #[error("CP rank must be at least 1")]
    InvalidRank,
    #[error("malformed product structure {0:?}")]
    Parse(String),
    #[error("Haar mean {mean} does not exceed the GME threshold {threshold} at n = {n}; the tail bound is vacuous")]
    VacuousTail { n: usize, mean: f64, threshold: f64 },
    #[error(transparent)]
    Lp(#[from] LpError),
}

pub type Result<T> = std::result::Result<T, HierarchyError>;

/// An unlabeled product structure: block sizes in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductStructure {
    blocks: Vec<usize>,
}

impl ProductStructure {
    /// Sorts `blocks` into non-increasing order; zero-size blocks and empty
    /// lists are rejected.
    pub fn new(mut blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(HierarchyError::Parse(format!("{blocks:?}")));
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ProductStructure { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// True when `self` arises from `coarser` by splitting blocks.
    pub fn refines(&self, coarser: &ProductStructure) -> bool {
        if self.n() != coarser.n() {
            return false;
        }
        fn place(parts: &[usize], room: &mut [usize]) -> bool {
            let Some((&first, rest)) = parts.split_first() else {
                return room.iter().all(|&r| r == 0);
            };
            for i in 0..room.len() {
                if room[i] >= first && (i == 0 || room[i] != room[i - 1]) {
                    room[i] -= first;
                    let ok = place(rest, room);
                    room[i] += first;
                    if ok {
                        return true;
                    }
                }
            }
            false
        }
        let mut room = coarser.blocks.clone();
        place(&self.blocks, &mut room)
    }
}

impl fmt::Display for ProductStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for ProductStructure {
    type Err = HierarchyError;

    /// Accepts `3x2x1`, `3⊗2⊗1` or `3,2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let blocks = s
            .split(['x', '⊗', ','])
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| HierarchyError::Parse(s.to_string()))?;
        ProductStructure::new(blocks)
    }
}

/// All integer partitions of `n` as non-increasing block lists, in
/// descending lexicographic order.
pub fn integer_partitions(n: usize) -> Vec<ProductStructure> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<ProductStructure>) {
        if rem == 0 {
            out.push(ProductStructure { blocks: cur.clone() });
            return;
        }
        for b in (1..=rem.min(max)).rev() {
            cur.push(b);
            go(rem - b, b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct CmaxEntry {
    pub value: Q,
    /// Whether some state is known to reach `value`.
    pub achievable: bool,
}

/// `C*(k)` for a range of `k`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CmaxTable {
    entries: BTreeMap<usize, CmaxEntry>,
}

/// Sizes at which a state reaching the LP value is known and shipped.
pub fn lp_value_achieved(n: usize) -> bool {
    n <= 12 && n != 7
}

impl CmaxTable {
    /// `C*(1) = 0` plus LP values for `2..=max_n`.
    pub fn from_lp(max_n: usize) -> Result<Self> {
        let mut t = CmaxTable::default();
        t.insert(1, q_int(0), true);
        for n in 2..=max_n {
            let v = solve_cmax_lp(n)?.cmax_bound();
            t.insert(n, v, lp_value_achieved(n));
        }
        Ok(t)
    }

    pub fn insert(&mut self, n: usize, value: Q, achievable: bool) {
        self.entries.insert(n, CmaxEntry { value, achievable });
    }

    pub fn get(&self, n: usize) -> Option<&Q> {
        self.entries.get(&n).map(|e| &e.value)
    }

    pub fn entry(&self, n: usize) -> Option<&CmaxEntry> {
        self.entries.get(&n)
    }

    pub fn is_achievable(&self, n: usize) -> bool {
        self.entries.get(&n).is_some_and(|e| e.achievable)
    }

    pub fn max_n(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &CmaxEntry)> {
        self.entries.iter()
    }

    fn require(&self, n: usize) -> Result<&Q> {
        self.get(n).ok_or(HierarchyError::Missing(n))
    }
}

/// `ζ*(s) = 1 - Π (1 - C*(b_i))`.
pub fn structure_bound(s: &ProductStructure, cmax: &CmaxTable) -> Result<Q> {
    let mut keep = q_int(1);
    for &b in s.blocks() {
        keep *= q_int(1) - cmax.require(b)?;
    }
    Ok(q_int(1) - keep)
}

/// Largest CE of a biseparable `n`-qubit pure state.
pub fn gme_threshold(n: usize, cmax: &CmaxTable) -> Result<Q> {
    if n < 2 {
        return Err(HierarchyError::TooSmall { n, min: 2 });
    }
    let mut best = q_int(0);
    for k in 1..=n / 2 {
        let s = ProductStructure::new(vec![n - k, k])?;
        let v = structure_bound(&s, cmax)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyRow {
    pub structure: ProductStructure,
    pub zeta_star: Q,
    /// Some block uses a `C*` value not known to be reachable, so the row is
    /// only an upper bound.
    pub loose: bool,
}

/// All product structures of `n` qubits ordered by `ζ*`, largest first.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyTable {
    pub n: usize,
    pub rows: Vec<HierarchyRow>,
}

impl HierarchyTable {
    /// `ζ(n)`: the largest two-block entry.
    pub fn gme_threshold(&self) -> Q {
        self.rows
            .iter()
            .filter(|r| r.structure.blocks().len() == 2)
            .map(|r| r.zeta_star.clone())
            .max()
            .unwrap_or_else(|| q_int(0))
    }

    pub fn find(&self, s: &ProductStructure) -> Option<&HierarchyRow> {
        self.rows.iter().find(|r| &r.structure == s)
    }
}

/// Ties keep the lexicographically larger structure first.
pub fn build_hierarchy(n: usize, cmax: &CmaxTable) -> Result<HierarchyTable> {
    if n < 2 {
        return Err(HierarchyError::TooSmall { n, min: 2 });
    }
    let mut rows = integer_partitions(n)
        .into_iter()
        .map(|s| {
            let zeta_star = structure_bound(&s, cmax)?;
            let loose = s.blocks().iter().any(|&b| !cmax.is_achievable(b));
            Ok(HierarchyRow {
                structure: s,
                zeta_star,
                loose,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.zeta_star.cmp(&a.zeta_star));
    Ok(HierarchyTable { n, rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificationReport {
    pub n: usize,
    pub ce: f64,
    pub gme_threshold: Q,
    pub gme_certified: bool,
    /// Structures with `ζ* < ce`, in table order.
    pub excluded: Vec<ProductStructure>,
    pub surviving: Vec<ProductStructure>,
}

fn check_ce(ce: f64) -> Result<Q> {
    if !(0.0..=1.0).contains(&ce) {
        return Err(HierarchyError::InvalidCe(ce));
    }
    from_f64(ce).ok_or(HierarchyError::InvalidCe(ce))
}

/// Compares `ce` exactly against every row; equality does not exclude.
pub fn certify(ce: f64, table: &HierarchyTable) -> Result<CertificationReport> {
    let exact = check_ce(ce)?;
    let (excluded, surviving): (Vec<_>, Vec<_>) =
        table.rows.iter().partition(|r| r.zeta_star < exact);
    let threshold = table.gme_threshold();
    Ok(CertificationReport {
        n: table.n,
        ce,
        gme_certified: exact > threshold,
        gme_threshold: threshold,
        excluded: excluded.into_iter().map(|r| r.structure.clone()).collect(),
        surviving: surviving.into_iter().map(|r| r.structure.clone()).collect(),
    })
}

/// `ζ*([k, n-k])` plus the impurity correction `2√(1 - Tr ρ²)`, exactly
/// (the square root is taken in `f64` and then converted).
pub fn mixed_cut_threshold(purity: f64, n: usize, k: usize, cmax: &CmaxTable) -> Result<Q> {
    if !(0.0..=1.0).contains(&purity) {
        return Err(HierarchyError::InvalidPurity(purity));
    }
    if k == 0 || k >= n {
        return Err(HierarchyError::InvalidCut { n, k });
    }
    let pure = structure_bound(&ProductStructure::new(vec![k, n - k])?, cmax)?;
    let correction = 2.0 * (1.0 - purity).sqrt();
    let correction = from_f64(correction).ok_or(HierarchyError::InvalidPurity(purity))?;
    Ok(pure + correction)
}

/// True when `ce` rules out every biseparable state across a `k | n-k` cut.
pub fn certify_mixed(ce: f64, purity: f64, n: usize, k: usize, cmax: &CmaxTable) -> Result<bool> {
    let exact = check_ce(ce)?;
    Ok(exact > mixed_cut_threshold(purity, n, k, cmax)?)
}

/// `1 - 2^{-n} Σ_k C(n,k) max(1/R, 2^{-min(k,n-k)})`: the largest CE of a
/// state with CP rank at most `R`.
pub fn cp_rank_ce_bound_exact(n: usize, r: usize) -> Result<Q> {
    if r == 0 {
        return Err(HierarchyError::InvalidRank);
    }
    if n == 0 {
        return Err(HierarchyError::TooSmall { n, min: 1 });
    }
    let inv_r = Q::new(1.into(), (r as i64).into());
    let n32 = n as u32;
    let mut sum = q_int(0);
    for k in 0..=n32 {
        let floor = q_pow(2, -(k.min(n32 - k) as i32));
        sum += Q::from_integer(binomial(n32, k)) * floor.max(inv_r.clone());
    }
    Ok(q_int(1) - sum * q_pow(2, -(n as i32)))
}

pub fn cp_rank_ce_bound(n: usize, r: usize) -> Result<f64> {
    cp_rank_ce_bound_exact(n, r).map(|q| crate::rational::to_f64(&q))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricBound {
    /// Lower bound on the geometric measure `E_g`.
    pub eg_lower: f64,
    /// Upper bound on the largest product-state overlap `Λ_max`.
    pub lambda_max_upper: f64,
}

/// `E_g ≥ CE²/2` and `Λ_max ≤ √(1 - CE²/2)`.
pub fn geometric_measure_lower_bound(ce: f64) -> Result<GeometricBound> {
    if !(0.0..=1.0).contains(&ce) {
        return Err(HierarchyError::InvalidCe(ce));
    }
    let eg = ce * ce / 2.0;
    Ok(GeometricBound {
        eg_lower: eg,
        lambda_max_upper: (1.0 - eg).sqrt(),
    })
}

/// Chebyshev bound `Var / (mean - ζ(n))²` on the fraction of Haar-random
/// states whose CE does not exceed `ζ(n)`.
pub fn haar_tail_bound_exact(n: usize, cmax: &CmaxTable) -> Result<Q> {
    let zeta = gme_threshold(n, cmax)?;
    let (mean, var) = haar_moments_exact(n);
    let gap = &mean - &zeta;
    if !gap.is_positive() || gap.is_zero() {
        return Err(HierarchyError::VacuousTail {
            n,
            mean: crate::rational::to_f64(&mean),
            threshold: crate::rational::to_f64(&zeta),
        });
    }
    Ok(var / (&gap * &gap))
}

pub fn haar_tail_bound(n: usize, cmax: &CmaxTable) -> Result<f64> {
    haar_tail_bound_exact(n, cmax).map(|q| crate::rational::to_f64(&q))
}
