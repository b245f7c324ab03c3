//! Exact linear programs over quaternary Krawtchouk polynomials.
//!
//! The maximal-CE program is
//!
//! ```text
//! minimize 3^n y_0
//! subject to y ≥ 0,  Σ_w K_l(w) y_w ≥ 0 for l = 0..n,  Σ_w 3^{n-w} y_w = 1,
//! ```
//!
//! with variables on even weights `w = 0, 2, …, 2⌊n/2⌋`. Its minimum `L(n)`
//! gives `C*(n) ≤ 1 - L(n)`. Everything here runs in exact rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{big_pow, binomial, q_frac, q_int, q_pow, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("n = {n} exceeds the supported maximum of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("the program is unbounded")]
    Unbounded,
    #[error("constraint right-hand sides must be nonnegative")]
    NegativeRhs,
    #[error("simplex did not terminate within {0} pivots")]
    IterationLimit(usize),
    #[error("solver self-check failed: {0}")]
    Verification(String),
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("k = {k} exceeds n = {n}")]
    BadK { n: usize, k: usize },
}

pub type Result<T> = std::result::Result<T, LpError>;

/// Largest `n` accepted by the LP solvers.
pub const MAX_LP_QUBITS: usize = 31;

/// Quaternary Krawtchouk polynomials for a fixed length `n`:
/// `K_i(x) = Σ_k C(x,k) C(n-x,i-k) (-1)^k 3^{i-k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrawtchoukMatrix {
    n: usize,
    /// `table[i][x] = K_i(x)` for `0 ≤ i, x ≤ n`.
    table: Vec<Vec<BigInt>>,
}

impl KrawtchoukMatrix {
    pub fn new(n: usize) -> Self {
        let n32 = n as u32;
        let table = (0..=n32)
            .map(|i| {
                (0..=n32)
                    .map(|x| {
                        let mut acc = BigInt::zero();
                        for k in 0..=i.min(x) {
                            let term = binomial(x, k) * binomial(n32 - x, i - k) * big_pow(3, i - k);
                            if k % 2 == 0 {
                                acc += term;
                            } else {
                                acc -= term;
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        KrawtchoukMatrix { n, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `K_i(x)`.
    pub fn value(&self, i: usize, x: usize) -> &BigInt {
        &self.table[i][x]
    }

    /// The even weights `0, 2, …, 2⌊n/2⌋` indexing LP variables.
    pub fn even_weights(&self) -> Vec<usize> {
        (0..=self.n).step_by(2).collect()
    }

    /// The `(n+1) × (⌊n/2⌋+1)` constraint matrix; row `l`, column `j`
    /// holds `K_l(2j)`.
    pub fn lp_matrix(&self) -> Vec<Vec<BigInt>> {
        (0..=self.n)
            .map(|l| {
                self.even_weights()
                    .into_iter()
                    .map(|w| self.table[l][w].clone())
                    .collect()
            })
            .collect()
    }

    /// `3^x C(n,x) K_i(x) = 3^i C(n,i) K_x(i)` for every `i, x`.
    pub fn verify_reciprocity(&self) -> bool {
        let n = self.n as u32;
        (0..=n).all(|x| {
            (0..=n).all(|i| {
                big_pow(3, x) * binomial(n, x) * &self.table[i as usize][x as usize]
                    == big_pow(3, i) * binomial(n, i) * &self.table[x as usize][i as usize]
            })
        })
    }
}

pub fn krawtchouk(n: usize) -> KrawtchoukMatrix {
    KrawtchoukMatrix::new(n)
}

/// Result of the textbook simplex on `max c·x, A x ≤ b, x ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexResult {
    pub value: Q,
    pub x: Vec<Q>,
    /// Optimal multipliers of the `A x ≤ b` rows.
    pub duals: Vec<Q>,
    pub pivots: usize,
}

/// Primal simplex with Bland's rule. Requires `b ≥ 0` so the origin is a
/// starting vertex.
pub fn simplex_max(c: &[Q], a: &[Vec<Q>], b: &[Q]) -> Result<SimplexResult> {
    let m = a.len();
    let nv = c.len();
    if b.len() != m {
        return Err(LpError::Length {
            expected: m,
            got: b.len(),
        });
    }
    if let Some(row) = a.iter().find(|r| r.len() != nv) {
        return Err(LpError::Length {
            expected: nv,
            got: row.len(),
        });
    }
    if b.iter().any(|v| v.is_negative()) {
        return Err(LpError::NegativeRhs);
    }
    let width = nv + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row = vec![Q::zero(); width];
            row[..nv].clone_from_slice(&a[i]);
            row[nv + i] = Q::one();
            row[rhs] = b[i].clone();
            row
        })
        .collect();
    let mut obj = vec![Q::zero(); width];
    for j in 0..nv {
        obj[j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();
    let limit = 10_000;
    let mut pivots = 0;
    loop {
        let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Err(LpError::Unbounded);
        };
        let p = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        let f = obj[enter].clone();
        for (v, pv) in obj.iter_mut().zip(&pivot_row) {
            *v -= &f * pv;
        }
        basis[r] = enter;
        pivots += 1;
        if pivots > limit {
            return Err(LpError::IterationLimit(limit));
        }
    }
    let mut x = vec![Q::zero(); nv];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nv {
            x[bv] = t[i][rhs].clone();
        }
    }
    let duals = obj[nv..nv + m].to_vec();
    Ok(SimplexResult {
        value: obj[rhs].clone(),
        x,
        duals,
        pivots,
    })
}

/// Checks primal feasibility, dual feasibility and equal objective values,
/// all exactly.
fn verify_simplex(c: &[Q], a: &[Vec<Q>], b: &[Q], sol: &SimplexResult) -> Result<()> {
    let fail = |msg: &str| Err(LpError::Verification(msg.to_string()));
    if sol.x.iter().any(|v| v.is_negative()) || sol.duals.iter().any(|v| v.is_negative()) {
        return fail("negative primal or dual component");
    }
    for (row, bi) in a.iter().zip(b) {
        let lhs: Q = row.iter().zip(&sol.x).map(|(r, x)| r * x).sum();
        if lhs > *bi {
            return fail("primal constraint violated");
        }
    }
    for j in 0..c.len() {
        let col: Q = a.iter().zip(&sol.duals).map(|(row, y)| &row[j] * y).sum();
        if col < c[j] {
            return fail("dual constraint violated");
        }
    }
    let primal: Q = c.iter().zip(&sol.x).map(|(c, x)| c * x).sum();
    let dual: Q = b.iter().zip(&sol.duals).map(|(b, y)| b * y).sum();
    if primal != sol.value || dual != sol.value {
        return fail("primal and dual objectives differ");
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Optimum of one of the Krawtchouk programs.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub n: usize,
    /// For the maximal-CE program this is the minimum of `3^n y_0`; for the
    /// Bell-pair program it is the maximum expected pair count.
    pub optimal_value: Q,
    /// Optimal `y_w`, one entry per even weight.
    pub y: Vec<Q>,
    pub status: LpStatus,
}

impl LpSolution {
    /// `1 - L(n)`, the upper bound on maximal CE.
    pub fn cmax_bound(&self) -> Q {
        q_int(1) - &self.optimal_value
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(LpError::TooSmall { n, min: 2 });
    }
    if n > MAX_LP_QUBITS {
        return Err(LpError::TooLarge {
            n,
            max: MAX_LP_QUBITS,
        });
    }
    Ok(())
}

/// True when `y` (indexed by even weight) satisfies `y ≥ 0`, `K y ≥ 0` and
/// `Σ 3^{n-w} y_w = 1` exactly.
pub fn is_feasible(k: &KrawtchoukMatrix, y: &[Q]) -> bool {
    let weights = k.even_weights();
    if y.len() != weights.len() || y.iter().any(|v| v.is_negative()) {
        return false;
    }
    let n = k.n();
    let rows_ok = (0..=n).all(|l| {
        let s: Q = weights
            .iter()
            .zip(y)
            .map(|(&w, v)| Q::from_integer(k.value(l, w).clone()) * v)
            .sum();
        !s.is_negative()
    });
    let norm: Q = weights
        .iter()
        .zip(y)
        .map(|(&w, v)| q_pow(3, (n - w) as i32) * v)
        .sum();
    rows_ok && norm == q_int(1)
}

/// Eliminates `y_0` through the normalization row, leaving
/// `Σ_{w>0} (K_l(0) 3^{-w} - K_l(w)) y_w ≤ K_l(0) 3^{-n}` for each `l`
/// and `Σ_{w>0} 3^{n-w} y_w ≤ 1` for `y_0 ≥ 0`.
fn reduced_constraints(k: &KrawtchoukMatrix) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = k.n();
    let rest: Vec<usize> = k.even_weights().into_iter().skip(1).collect();
    let mut a = Vec::with_capacity(n + 2);
    let mut b = Vec::with_capacity(n + 2);
    a.push(rest.iter().map(|&w| q_pow(3, (n - w) as i32)).collect());
    b.push(q_int(1));
    for l in 0..=n {
        let k0 = Q::from_integer(k.value(l, 0).clone());
        a.push(
            rest.iter()
                .map(|&w| &k0 * q_pow(3, -(w as i32)) - Q::from_integer(k.value(l, w).clone()))
                .collect(),
        );
        b.push(k0 * q_pow(3, -(n as i32)));
    }
    (a, b)
}

fn restore_y0(n: usize, rest: &[Q]) -> Vec<Q> {
    let mut t = q_int(1);
    for (j, v) in rest.iter().enumerate() {
        t -= q_pow(3, (n - 2 * (j + 1)) as i32) * v;
    }
    let mut y = vec![t * q_pow(3, -(n as i32))];
    y.extend_from_slice(rest);
    y
}

/// Solves the maximal-CE program exactly.
pub fn solve_cmax_lp(n: usize) -> Result<LpSolution> {
    check_n(n)?;
    let k = KrawtchoukMatrix::new(n);
    let m = k.even_weights().len();
    let mut witness = vec![Q::zero(); m];
    witness[0] = q_pow(3, -(n as i32));
    if !is_feasible(&k, &witness) {
        return Err(LpError::Verification("feasibility witness rejected".into()));
    }
    let (a, b) = reduced_constraints(&k);
    let c: Vec<Q> = k.even_weights()[1..]
        .iter()
        .map(|&w| q_pow(3, (n - w) as i32))
        .collect();
    let sol = simplex_max(&c, &a, &b)?;
    verify_simplex(&c, &a, &b, &sol)?;
    let y = restore_y0(n, &sol.x);
    if !is_feasible(&k, &y) {
        return Err(LpError::Verification("optimal point infeasible".into()));
    }
    let optimal_value = q_pow(3, n as i32) * &y[0];
    if optimal_value != q_int(1) - &sol.value {
        return Err(LpError::Verification("objective bookkeeping mismatch".into()));
    }
    Ok(LpSolution {
        n,
        optimal_value,
        y,
        status: LpStatus::Optimal,
    })
}

/// Closed-form dual point for the Bell-pair program, in the scaling
/// `ν d ≥ b + Kᵀλ` with `d_i = 3^{-2i}` and `b_i = 2i·3^{n-2i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellDualCertificate {
    pub nu: Q,
    pub lambda: Vec<Q>,
    /// `ν d_i` for each even weight `2i`.
    pub lhs: Vec<Q>,
    /// `b_i + (Kᵀλ)_i`.
    pub rhs: Vec<Q>,
}

impl BellDualCertificate {
    /// Builds `ν = (n/4) 3^n`, `λ = ¾ e_{n-1}`. Since
    /// `K_{n-1}(2i) = 3^{n-1-2i}(n - 8i)` the two sides agree termwise.
    pub fn new(k: &KrawtchoukMatrix) -> Self {
        let n = k.n();
        let nu = q_frac(n as i64, 4) * q_pow(3, n as i32);
        let mut lambda = vec![Q::zero(); n + 1];
        lambda[n - 1] = q_frac(3, 4);
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for w in k.even_weights() {
            lhs.push(&nu * q_pow(3, -(w as i32)));
            let ktl: Q = (0..=n)
                .map(|l| Q::from_integer(k.value(l, w).clone()) * &lambda[l])
                .sum();
            rhs.push(q_int(w as i64) * q_pow(3, (n - w) as i32) + ktl);
        }
        BellDualCertificate {
            nu,
            lambda,
            lhs,
            rhs,
        }
    }

    /// Dual feasibility: `λ ≥ 0` and `ν d ≥ b + Kᵀλ`.
    pub fn is_feasible(&self) -> bool {
        self.lambda.iter().all(|l| !l.is_negative())
            && self.lhs.iter().zip(&self.rhs).all(|(l, r)| l >= r)
    }

    pub fn is_tight(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Dual objective `ν / 3^n`.
    pub fn value(&self) -> Q {
        &self.nu / Q::from_integer(big_pow(3, self.lambda.len() as u32 - 1))
    }
}

/// Solves `max Σ_w w 3^{n-w} y_w` over the maximal-CE feasible region and
/// checks the optimum against the `n/4` dual certificate.
pub fn solve_bell_lp(n: usize) -> Result<LpSolution> {
    check_n(n)?;
    let k = KrawtchoukMatrix::new(n);
    let (a, b) = reduced_constraints(&k);
    let c: Vec<Q> = k.even_weights()[1..]
        .iter()
        .map(|&w| q_int(w as i64) * q_pow(3, (n - w) as i32))
        .collect();
    let sol = simplex_max(&c, &a, &b)?;
    verify_simplex(&c, &a, &b, &sol)?;
    let y = restore_y0(n, &sol.x);
    if !is_feasible(&k, &y) {
        return Err(LpError::Verification("optimal point infeasible".into()));
    }
    let quarter_n = q_frac(n as i64, 4);
    if sol.value != quarter_n {
        return Err(LpError::Verification(format!(
            "Bell-pair optimum {} differs from n/4",
            sol.value
        )));
    }
    let cert = BellDualCertificate::new(&k);
    if !cert.is_feasible() || cert.value() != quarter_n {
        return Err(LpError::Verification("dual certificate rejected".into()));
    }
    Ok(LpSolution {
        n,
        optimal_value: sol.value,
        y,
        status: LpStatus::Optimal,
    })
}

/// `B_i = 2^{k-n} Σ_j K_i(j) A_j`.
pub fn macwilliams(a: &[Q], n: usize, k: usize) -> Result<Vec<Q>> {
    if a.len() != n + 1 {
        return Err(LpError::Length {
            expected: n + 1,
            got: a.len(),
        });
    }
    if k > n {
        return Err(LpError::BadK { n, k });
    }
    let km = KrawtchoukMatrix::new(n);
    let scale = q_pow(2, k as i32 - n as i32);
    Ok((0..=n)
        .map(|i| {
            let s: Q = a
                .iter()
                .enumerate()
                .map(|(j, aj)| Q::from_integer(km.value(i, j).clone()) * aj)
                .sum();
            &scale * s
        })
        .collect())
}

/// Shor–Laflamme enumerator pair of an `[[n, k]]` code.
#[derive(Clone, Debug, PartialEq)]
pub struct Enumerators {
    pub n: usize,
    pub k: usize,
    pub a: Vec<Q>,
    pub b: Vec<Q>,
}

impl Enumerators {
    /// Derives `B` from `A` through the MacWilliams identity.
    pub fn from_a(a: Vec<Q>, n: usize, k: usize) -> Result<Self> {
        let b = macwilliams(&a, n, k)?;
        Ok(Enumerators { n, k, a, b })
    }

    /// Takes both vectors as given, without checking the identity.
    pub fn from_parts(a: Vec<Q>, b: Vec<Q>, n: usize, k: usize) -> Result<Self> {
        for v in [&a, &b] {
            if v.len() != n + 1 {
                return Err(LpError::Length {
                    expected: n + 1,
                    got: v.len(),
                });
            }
        }
        if k > n {
            return Err(LpError::BadK { n, k });
        }
        Ok(Enumerators { n, k, a, b })
    }

    pub fn odd_vanish(&self) -> bool {
        self.a.iter().skip(1).step_by(2).all(|v| v.is_zero())
    }

    /// `C = Σ_{w even} K_n(w) A_w`.
    pub fn c_value(&self) -> Q {
        let km = KrawtchoukMatrix::new(self.n);
        km.even_weights()
            .into_iter()
            .map(|w| Q::from_integer(km.value(self.n, w).clone()) * &self.a[w])
            .sum()
    }

    /// Even-weight part of `A` scaled onto the LP normalization
    /// `Σ 3^{n-w} y_w = 1`.
    pub fn rescaled(&self) -> Vec<Q> {
        let c = self.c_value();
        (0..=self.n).step_by(2).map(|w| &self.a[w] / &c).collect()
    }
}

/// Which inequality a coding-bound check evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundForm {
    /// All odd `A_i` vanish; the bound is stated on `B_n`.
    EvenWeights,
    /// Some odd `A_i` is nonzero; the bound is stated on `C`.
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub form: BoundForm,
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
}

/// `3^n / (L · 2^{n-k})`, the ceiling on `B_n`.
pub fn coding_bound_bn(n: usize, k: usize, l: &Q) -> Q {
    q_pow(3, n as i32) / (l * q_pow(2, (n - k) as i32))
}

/// Evaluates the `B_n` bound on `enums`, or its general form
/// `C ≤ 3^n / L` when odd weights are present.
pub fn check_coding_bound_bn(enums: &Enumerators, l: &Q) -> BoundCheck {
    let (form, lhs, rhs) = if enums.odd_vanish() {
        (
            BoundForm::EvenWeights,
            enums.b[enums.n].clone(),
            coding_bound_bn(enums.n, enums.k, l),
        )
    } else {
        (
            BoundForm::General,
            enums.c_value(),
            q_pow(3, enums.n as i32) / l,
        )
    };
    let holds = lhs <= rhs;
    BoundCheck {
        form,
        lhs,
        rhs,
        holds,
    }
}

/// `Σ_i i 3^{-i} A_i ≤ (n/4)(2^{n-k}/3^n) B_n`, or with odd weights present,
/// `Σ_{w even} w 3^{-w} A_w ≤ (n/4) C / 3^n`.
pub fn coding_bound_moment(enums: &Enumerators) -> BoundCheck {
    let n = enums.n;
    let moment = |step: usize| -> Q {
        (0..=n)
            .step_by(step)
            .map(|i| q_int(i as i64) * q_pow(3, -(i as i32)) * &enums.a[i])
            .sum()
    };
    let quarter_n = q_frac(n as i64, 4);
    let (form, lhs, rhs) = if enums.odd_vanish() {
        (
            BoundForm::EvenWeights,
            moment(1),
            quarter_n * q_pow(2, (n - enums.k) as i32) * q_pow(3, -(n as i32)) * &enums.b[n],
        )
    } else {
        (
            BoundForm::General,
            moment(2),
            quarter_n * enums.c_value() * q_pow(3, -(n as i32)),
        )
    };
    let holds = lhs <= rhs;
    BoundCheck {
        form,
        lhs,
        rhs,
        holds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_decimal;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn krawtchouk_small_identities() {
        for n in 1..=10usize {
            let k = KrawtchoukMatrix::new(n);
            for x in 0..=n {
                assert_eq!(*k.value(0, x), BigInt::one());
                assert_eq!(*k.value(1, x), BigInt::from(3 * n as i64 - 4 * x as i64));
            }
            for i in 0..=n {
                let want = binomial(n as u32, i as u32) * big_pow(3, i as u32);
                assert_eq!(*k.value(i, 0), want);
            }
            assert!(k.verify_reciprocity());
        }
    }

    #[test]
    fn krawtchouk_top_rows() {
        for n in 2..=12usize {
            let k = KrawtchoukMatrix::new(n);
            for w in k.even_weights() {
                assert_eq!(*k.value(n, w), big_pow(3, (n - w) as u32));
                let i = (w / 2) as i64;
                if w < n {
                    let want = big_pow(3, (n - 1 - w) as u32) * BigInt::from(n as i64 - 8 * i);
                    assert_eq!(*k.value(n - 1, w), want);
                }
            }
        }
    }

    #[test]
    fn lp_matrix_shape() {
        let k = KrawtchoukMatrix::new(5);
        let m = k.lp_matrix();
        assert_eq!(m.len(), 6);
        assert!(m.iter().all(|r| r.len() == 3));
    }

    #[test]
    fn simplex_textbook() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3.
        let c = qs(&[3, 2]);
        let a = vec![qs(&[1, 1]), qs(&[1, 3]), qs(&[1, 0])];
        let b = qs(&[4, 6, 3]);
        let s = simplex_max(&c, &a, &b).unwrap();
        assert_eq!(s.value, q_int(11));
        assert_eq!(s.x, qs(&[3, 1]));
        verify_simplex(&c, &a, &b, &s).unwrap();
    }

    #[test]
    fn simplex_unbounded() {
        let c = qs(&[1, 0]);
        let a = vec![qs(&[0, 1])];
        assert_eq!(simplex_max(&c, &a, &qs(&[1])), Err(LpError::Unbounded));
        assert_eq!(
            simplex_max(&c, &a, &qs(&[-1])),
            Err(LpError::NegativeRhs)
        );
    }

    #[test]
    fn cmax_small() {
        let expect = ["0.25", "0.375", "0.5", "0.625", "0.71875"];
        for (n, e) in (2..=6).zip(expect) {
            let s = solve_cmax_lp(n).unwrap();
            assert_eq!(s.cmax_bound(), parse_decimal(e).unwrap(), "n={n}");
            assert_eq!(s.status, LpStatus::Optimal);
        }
        assert!(solve_cmax_lp(1).is_err());
        assert!(solve_cmax_lp(32).is_err());
    }

    #[test]
    fn bell_small() {
        for n in 2..=8 {
            assert_eq!(solve_bell_lp(n).unwrap().optimal_value, q_frac(n as i64, 4));
        }
    }

    #[test]
    fn bell_certificate_n4() {
        let c = BellDualCertificate::new(&KrawtchoukMatrix::new(4));
        assert_eq!(c.lhs[0], q_int(81));
        assert_eq!(c.rhs[0], q_int(81));
        assert!(c.is_tight());
        assert_eq!(c.value(), q_int(1));
    }

    #[test]
    fn macwilliams_examples() {
        assert_eq!(macwilliams(&qs(&[1, 0, 3]), 2, 0).unwrap(), qs(&[1, 0, 3]));
        assert_eq!(
            macwilliams(&qs(&[1, 0, 3, 4]), 3, 0).unwrap(),
            qs(&[1, 0, 3, 4])
        );
        let id = macwilliams(&qs(&[1, 0, 0, 0]), 3, 3).unwrap();
        assert_eq!(id, qs(&[1, 9, 27, 27]));
        assert!(macwilliams(&qs(&[1, 0]), 2, 0).is_err());
    }

    #[test]
    fn bell_code_bound() {
        let l = solve_cmax_lp(2).unwrap().optimal_value;
        assert_eq!(l, q_frac(3, 4));
        let e = Enumerators::from_a(qs(&[1, 0, 3]), 2, 0).unwrap();
        let chk = check_coding_bound_bn(&e, &l);
        assert_eq!(chk.form, BoundForm::EvenWeights);
        assert_eq!(chk.lhs, q_int(3));
        assert_eq!(chk.rhs, q_int(3));
        assert!(chk.holds);
        let inflated = Enumerators::from_parts(qs(&[1, 0, 3]), qs(&[1, 0, 4]), 2, 0).unwrap();
        assert!(!check_coding_bound_bn(&inflated, &l).holds);
    }

    #[test]
    fn general_form_used_for_odd_weights() {
        let l = solve_cmax_lp(2).unwrap().optimal_value;
        let e = Enumerators::from_a(qs(&[1, 2, 1]), 2, 0).unwrap();
        let chk = check_coding_bound_bn(&e, &l);
        assert_eq!(chk.form, BoundForm::General);
        assert!(chk.holds);
        assert_eq!(coding_bound_moment(&e).form, BoundForm::General);
    }

    #[test]
    fn moment_bound_examples() {
        let id = Enumerators::from_a(qs(&[1, 0, 0]), 2, 2).unwrap();
        let m = coding_bound_moment(&id);
        assert_eq!(m.lhs, q_int(0));
        assert!(m.holds);
        let ghz4 = Enumerators::from_a(qs(&[1, 0, 6, 0, 9]), 4, 0).unwrap();
        assert_eq!(ghz4.b, ghz4.a);
        assert!(coding_bound_moment(&ghz4).holds);
    }

    #[test]
    fn odd_length_type_two_is_impossible() {
        // A self-dual, all-even enumerator at odd n has A_n = B_n = 0, so the
        // moment bound collapses to lhs ≤ 0.
        let a = qs(&[1, 0, 3, 0]);
        let e = Enumerators::from_parts(a.clone(), a, 3, 0).unwrap();
        let m = coding_bound_moment(&e);
        assert_eq!(m.rhs, q_int(0));
        assert!(!m.holds);
    }

    #[test]
    fn witness_and_rescaled_feasibility() {
        let k = KrawtchoukMatrix::new(4);
        let mut y = vec![Q::zero(); 3];
        y[0] = q_pow(3, -4);
        assert!(is_feasible(&k, &y));
        y[0] = q_pow(3, -3);
        assert!(!is_feasible(&k, &y));
        let ghz4 = Enumerators::from_a(qs(&[1, 0, 6, 0, 9]), 4, 0).unwrap();
        assert!(is_feasible(&k, &ghz4.rescaled()));
    }
}
