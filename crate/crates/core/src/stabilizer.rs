//! Pauli strings, stabilizer groups, graph states and weight enumerators.
//!
//! For a stabilizer state every reduced purity is
//! `Tr[ρ_α²] = 2^{-|α|} · #{g ∈ S : supp(g) ⊆ α}`, and summing over `α` gives
//! `CE = 1 - 4^{-n} Σ_i A_i 3^{n-i}` in terms of the weight distribution
//! `A_i` of the group.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{big_pow, q_int, Q};
use crate::statevec::{PureState, StateError, MAX_MASK_QUBITS};

/// Largest group size enumerated element by element (`2^26` products).
pub const MAX_ENUMERATION_QUBITS: usize = 26;
/// Largest `n` for which every graph is visited.
pub const MAX_EXHAUSTIVE_QUBITS: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilizerError {
    #[error("vertex {v} is out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("graph on {0} vertices is not supported")]
    BadSize(usize),
    #[error("generators {0} and {1} anticommute")]
    Anticommuting(usize, usize),
    #[error("generators are linearly dependent")]
    Dependent,
    #[error("generator {index} acts on {got} qubits, expected {n}")]
    GeneratorSize { index: usize, got: usize, n: usize },
    #[error("{n} qubits exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("group is not full rank: {generators} generators on {n} qubits")]
    NotFullRank { n: usize, generators: usize },
    #[error("exhaustive search is limited to n ≤ {MAX_EXHAUSTIVE_QUBITS}, got {0}")]
    ExhaustiveTooLarge(usize),
    #[error("malformed Pauli string {0:?}")]
    ParsePauli(String),
    #[error("malformed graph file: {0}")]
    ParseGraph(String),
    #[error(transparent)]
    State(#[from] StateError),
}

pub type Result<T> = std::result::Result<T, StabilizerError>;

/// `i^phase · Π_q X_q^{x_q} Z_q^{z_q}` on `n` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub n: usize,
    pub x: u32,
    pub z: u32,
    /// Power of `i`, modulo 4.
    pub phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    pub fn mul(&self, other: &PauliString) -> PauliString {
        let swaps = (self.z & other.x).count_ones() as u8;
        PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * swaps) % 4,
        }
    }

    fn symplectic(&self) -> u64 {
        self.x as u64 | ((self.z as u64) << 32)
    }
}

impl fmt::Display for PauliString {
    /// Qubit 0 leftmost, with the sign of the Hermitian form when the phase
    /// is real.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Each Y = iXZ absorbs one factor of i.
        let ys = (self.x & self.z).count_ones() as u8;
        let p = (self.phase + 4 - ys % 4) % 4;
        f.write_str(["+", "+i", "-", "-i"][p as usize])?;
        for q in 0..self.n {
            let c = match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliString {
    type Err = StabilizerError;

    /// Parses `[+|-][i]` followed by letters from `IXYZ`, qubit 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let err = || StabilizerError::ParsePauli(s.to_string());
        let mut rest = s.trim();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase += 1;
            rest = r;
        }
        if rest.is_empty() || rest.len() > MAX_MASK_QUBITS {
            return Err(err());
        }
        let (mut x, mut z) = (0u32, 0u32);
        for (q, c) in rest.chars().enumerate() {
            match c {
                'I' => {}
                'X' => x |= 1 << q,
                'Z' => z |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                    phase += 1;
                }
                _ => return Err(err()),
            }
        }
        Ok(PauliString {
            n: rest.len(),
            x,
            z,
            phase: phase % 4,
        })
    }
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || n > MAX_MASK_QUBITS {
            return Err(StabilizerError::BadSize(n));
        }
        let mut adj = vec![0u32; n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(StabilizerError::VertexOutOfRange { v, n });
                }
            }
            if a == b {
                return Err(StabilizerError::SelfLoop(a));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Graph { n, adj })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Graph::new(n, &[])
    }

    /// Vertex pairs `(i, j)`, `i < j`, in lexicographic order; bit `e` of an
    /// edge mask refers to pair `e` of this list.
    pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect()
    }

    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self> {
        let pairs = Graph::pair_list(n);
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(e, _)| (mask >> e) & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        Graph::new(n, &edges)
    }

    pub fn edge_mask(&self) -> u64 {
        Graph::pair_list(self.n)
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| (self.adj[i] >> j) & 1 == 1)
            .fold(0, |m, (e, _)| m | (1 << e))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        Graph::pair_list(self.n)
            .into_iter()
            .filter(|&(i, j)| (self.adj[i] >> j) & 1 == 1)
            .collect()
    }

    /// Toggles every edge inside the neighborhood of `v`.
    pub fn local_complement(&self, v: usize) -> Result<Graph> {
        if v >= self.n {
            return Err(StabilizerError::VertexOutOfRange { v, n: self.n });
        }
        let nb = self.adj[v];
        let mut adj = self.adj.clone();
        for a in 0..self.n {
            if (nb >> a) & 1 == 1 {
                adj[a] ^= nb & !(1 << a);
            }
        }
        Ok(Graph { n: self.n, adj })
    }

    pub fn to_json(&self) -> String {
        let f = GraphFile {
            n: self.n,
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&f).expect("plain data serializes")
    }

    /// `{ "n": int, "edges": [[a, b], ...] }`.
    pub fn from_json(text: &str) -> Result<Self> {
        let f: GraphFile =
            serde_json::from_str(text).map_err(|e| StabilizerError::ParseGraph(e.to_string()))?;
        let edges: Vec<_> = f.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(f.n, &edges)
    }
}

/// An abelian subgroup of the Pauli group given by independent generators.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
}

impl StabilizerGroup {
    pub fn new(n: usize, generators: Vec<PauliString>) -> Result<Self> {
        if n == 0 || n > MAX_MASK_QUBITS {
            return Err(StabilizerError::BadSize(n));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.n != n {
                return Err(StabilizerError::GeneratorSize {
                    index: i,
                    got: g.n,
                    n,
                });
            }
        }
        for i in 0..generators.len() {
            for j in (i + 1)..generators.len() {
                if !generators[i].commutes_with(&generators[j]) {
                    return Err(StabilizerError::Anticommuting(i, j));
                }
            }
        }
        let mut basis: Vec<u64> = Vec::new();
        for g in &generators {
            let mut v = g.symplectic();
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v == 0 {
                return Err(StabilizerError::Dependent);
            }
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(StabilizerGroup { n, generators })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn is_full_rank(&self) -> bool {
        self.generators.len() == self.n
    }
}

/// Generator `b` is `X_b Π_{v ∈ N(b)} Z_v`.
pub fn graph_state_group(g: &Graph) -> StabilizerGroup {
    let gens = (0..g.n())
        .map(|b| PauliString {
            n: g.n(),
            x: 1 << b,
            z: g.neighbors(b),
            phase: 0,
        })
        .collect();
    StabilizerGroup::new(g.n(), gens).expect("graph generators commute and are independent")
}

/// `A_i`: number of group elements of weight `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub n: usize,
    pub a: Vec<u64>,
}

impl WeightEnumerator {
    pub fn as_rationals(&self) -> Vec<Q> {
        self.a.iter().map(|&v| q_int(v as i64)).collect()
    }

    pub fn group_size(&self) -> u64 {
        self.a.iter().sum()
    }

    /// `Σ_i A_i 3^{n-i}`; smaller means more entangled.
    pub fn purity_sum(&self) -> u128 {
        self.a
            .iter()
            .enumerate()
            .map(|(i, &c)| c as u128 * 3u128.pow((self.n - i) as u32))
            .sum()
    }
}

fn weights_of(n: usize, gens: &[(u32, u32)]) -> Vec<u64> {
    let mut a = vec![0u64; n + 1];
    let split = gens.len().min(8);
    let (high, low) = gens.split_at(split);
    let partial: Vec<Vec<u64>> = (0..1u32 << high.len())
        .into_par_iter()
        .map(|prefix| {
            let mut counts = vec![0u64; n + 1];
            let (mut x, mut z) = (0u32, 0u32);
            for (i, &(gx, gz)) in high.iter().enumerate() {
                if (prefix >> i) & 1 == 1 {
                    x ^= gx;
                    z ^= gz;
                }
            }
            counts[(x | z).count_ones() as usize] += 1;
            for step in 1u64..(1u64 << low.len()) {
                let (gx, gz) = low[step.trailing_zeros() as usize];
                x ^= gx;
                z ^= gz;
                counts[(x | z).count_ones() as usize] += 1;
            }
            counts
        })
        .collect();
    for c in partial {
        for (t, v) in a.iter_mut().zip(c) {
            *t += v;
        }
    }
    a
}

/// Walks all `2^m` products of the `m` generators in Gray-code order.
pub fn enumerate_weights(group: &StabilizerGroup) -> Result<WeightEnumerator> {
    if group.n > MAX_ENUMERATION_QUBITS || group.generators.len() > MAX_ENUMERATION_QUBITS {
        return Err(StabilizerError::CapExceeded {
            n: group.n,
            cap: MAX_ENUMERATION_QUBITS,
        });
    }
    let gens: Vec<(u32, u32)> = group.generators.iter().map(|g| (g.x, g.z)).collect();
    Ok(WeightEnumerator {
        n: group.n,
        a: weights_of(group.n, &gens),
    })
}

/// `CE = 1 - 4^{-n} Σ_i A_i 3^{n-i}` for a stabilizer state.
pub fn ce_from_enumerator(we: &WeightEnumerator) -> Result<Q> {
    if we.a.len() != we.n + 1 || we.group_size() != 1u64 << we.n {
        return Err(StabilizerError::NotFullRank {
            n: we.n,
            generators: we.group_size().max(1).ilog2() as usize,
        });
    }
    let sum: Q = we
        .a
        .iter()
        .enumerate()
        .map(|(i, &c)| q_int(c as i64) * Q::from_integer(big_pow(3, (we.n - i) as u32)))
        .sum();
    Ok(q_int(1) - sum / Q::from_integer(big_pow(4, we.n as u32)))
}

/// CE of the graph state of `g`, exactly.
pub fn graph_ce(g: &Graph) -> Result<Q> {
    ce_from_enumerator(&enumerate_weights(&graph_state_group(g))?)
}

/// `2^{-n/2} Σ_x (-1)^{e(x)} |x⟩`, where `e(x)` counts edges with both ends
/// in `x`. Equal to applying CZ on every edge to `|+⟩^{⊗n}`.
pub fn graph_state_vector(g: &Graph) -> Result<PureState> {
    let n = g.n();
    let amp = (1.0 / (1u64 << n) as f64).sqrt();
    let edges = g.edges();
    let amps = (0..1usize << n)
        .map(|x| {
            let inside = edges
                .iter()
                .filter(|&&(a, b)| (x >> a) & 1 == 1 && (x >> b) & 1 == 1)
                .count();
            Complex64::new(if inside % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    Ok(PureState::new(n, amps)?)
}

fn purity_sum_of_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> u128 {
    let mut adj = [0u32; 32];
    for (e, &(i, j)) in pairs.iter().enumerate() {
        if (mask >> e) & 1 == 1 {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
    }
    let gens: Vec<(u32, u32)> = (0..n).map(|b| (1u32 << b, adj[b])).collect();
    let a = weights_of_serial(n, &gens);
    a.iter()
        .enumerate()
        .map(|(i, &c)| c as u128 * 3u128.pow((n - i) as u32))
        .sum()
}

fn weights_of_serial(n: usize, gens: &[(u32, u32)]) -> Vec<u64> {
    let mut a = vec![0u64; n + 1];
    let (mut x, mut z) = (0u32, 0u32);
    a[0] = 1;
    for step in 1u64..(1u64 << gens.len()) {
        let (gx, gz) = gens[step.trailing_zeros() as usize];
        x ^= gx;
        z ^= gz;
        a[(x | z).count_ones() as usize] += 1;
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Every labeled graph; `n ≤ 7`.
    Exhaustive,
    /// Edge-flip hill climbing with restarts.
    Random {
        seed: u64,
        iterations: u64,
        restarts: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best_ce: Q,
    pub witness: Graph,
    pub evaluated: u64,
}

/// Maximizes graph-state CE. Ties go to the smallest edge mask.
pub fn search_graph_states(n: usize, mode: SearchMode) -> Result<SearchResult> {
    search_graph_states_until(n, mode, None)
}

/// Like [`search_graph_states`]; a random search stops as soon as it reaches
/// `target`.
pub fn search_graph_states_until(n: usize, mode: SearchMode, target: Option<&Q>) -> Result<SearchResult> {
    if n == 0 || n > MAX_ENUMERATION_QUBITS {
        return Err(StabilizerError::BadSize(n));
    }
    let pairs = Graph::pair_list(n);
    let (mask, evaluated) = match mode {
        SearchMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_QUBITS {
                return Err(StabilizerError::ExhaustiveTooLarge(n));
            }
            let total = 1u64 << pairs.len();
            let (_, best) = (0..total)
                .into_par_iter()
                .map(|m| (purity_sum_of_mask(n, &pairs, m), m))
                .min()
                .expect("at least the empty graph");
            (best, total)
        }
        SearchMode::Random {
            seed,
            iterations,
            restarts,
        } => {
            let target_sum = target.map(|t| {
                let scaled = (q_int(1) - t) * Q::from_integer(big_pow(4, n as u32));
                scaled.to_integer()
            });
            let mut best: Option<(u128, u64)> = None;
            let mut evaluated = 0u64;
            'outer: for r in 0..restarts.max(1) {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream(r);
                let mut cur: u64 = if pairs.is_empty() {
                    0
                } else {
                    rng.random::<u64>() & ((1u64 << pairs.len()) - 1)
                };
                let mut cur_s = purity_sum_of_mask(n, &pairs, cur);
                evaluated += 1;
                for _ in 0..iterations {
                    if best.is_none_or(|(s, m)| (cur_s, cur) < (s, m)) {
                        best = Some((cur_s, cur));
                    }
                    if let (Some(t), Some((s, _))) = (&target_sum, best) {
                        if num_bigint::BigInt::from(s) <= *t {
                            break 'outer;
                        }
                    }
                    if pairs.is_empty() {
                        break;
                    }
                    let cand = cur ^ (1u64 << rng.random_range(0..pairs.len()));
                    let s = purity_sum_of_mask(n, &pairs, cand);
                    evaluated += 1;
                    if s <= cur_s {
                        cur = cand;
                        cur_s = s;
                    }
                }
                if best.is_none_or(|(s, m)| (cur_s, cur) < (s, m)) {
                    best = Some((cur_s, cur));
                }
            }
            (best.expect("at least one restart").1, evaluated)
        }
    };
    let witness = Graph::from_edge_mask(n, mask)?;
    let best_ce = graph_ce(&witness)?;
    Ok(SearchResult {
        best_ce,
        witness,
        evaluated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeType {
    /// Some element has odd weight.
    TypeI,
    /// Every element has even weight.
    TypeII,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalReport {
    pub n: usize,
    pub distance: usize,
    pub code_type: CodeType,
    /// Largest distance allowed for this length and type.
    pub distance_bound: usize,
    pub extremal: bool,
    pub claim_matches: Option<bool>,
    pub enumerator: WeightEnumerator,
}

/// Distance ceiling for a self-dual `[[n, 0, d]]` code of the given type.
pub fn distance_bound(n: usize, code_type: CodeType) -> usize {
    let base = 2 * (n / 6);
    match code_type {
        CodeType::TypeII => base + 2,
        CodeType::TypeI => match n % 6 {
            0 => base + 1,
            5 => base + 3,
            _ => base + 2,
        },
    }
}

/// Distance (least positive weight present), type and extremality of a
/// pure stabilizer code, optionally against a claimed distance.
pub fn verify_extremal_claims(group: &StabilizerGroup, claimed_distance: Option<usize>) -> Result<ExtremalReport> {
    if !group.is_full_rank() {
        return Err(StabilizerError::NotFullRank {
            n: group.n(),
            generators: group.generators().len(),
        });
    }
    let we = enumerate_weights(group)?;
    let distance = (1..=group.n()).find(|&i| we.a[i] > 0).unwrap_or(0);
    let code_type = if we.a.iter().skip(1).step_by(2).all(|&c| c == 0) {
        CodeType::TypeII
    } else {
        CodeType::TypeI
    };
    let bound = distance_bound(group.n(), code_type);
    Ok(ExtremalReport {
        n: group.n(),
        distance,
        code_type,
        distance_bound: bound,
        extremal: distance == bound,
        claim_matches: claimed_distance.map(|d| d == distance),
        enumerator: we,
    })
}

/// A uniformly random edge set; used to draw test instances.
pub fn random_graph(n: usize, rng: &mut impl Rng) -> Result<Graph> {
    let edges: BTreeSet<(usize, usize)> = Graph::pair_list(n)
        .into_iter()
        .filter(|_| rng.random::<bool>())
        .collect();
    Graph::new(n, &edges.into_iter().collect::<Vec<_>>())
}
