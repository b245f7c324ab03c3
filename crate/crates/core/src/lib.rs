//! Concentratable entanglement (CE) toolkit.
//!
//! For an `n`-qubit pure state the CE is one minus the average, over every
//! subset of qubits, of the purity of the reduced state on that subset.
//! Operationally it is the probability that at least one of `n` parallel
//! controlled-SWAP tests on two copies of the state reports a failure.
//!
//! The crate is split by concern:
//!
//! * [`statevec`]: pure and mixed states, subset purities, CE.
//! * [`swaptest`]: the ancilla bitstring distribution of the parallel SWAP
//!   test, shot sampling, bipartition exclusion and Bell-pair statistics.
//! * [`lp`]: quaternary Krawtchouk polynomials and an exact rational simplex
//!   solving the maximal-CE and Bell-pair linear programs, plus the coding
//!   bounds derived from them.
//! * [`hierarchy`]: CE bounds for every product structure, GME thresholds,
//!   certification of measured CE values.
//! * [`stabilizer`]: graph states, stabilizer groups, weight enumerators and
//!   graph-state search.
//! * [`haar`]: Haar-random sampling and closed-form CE moments.
//!
//! Qubit `0` is always the least-significant bit of a computational-basis
//! index. A [`statevec::SubsetMask`] with bit `i` set contains qubit `i`.

pub mod haar;
pub mod hierarchy;
pub mod lp;
pub mod rational;
pub mod reference;
pub mod stabilizer;
pub mod statevec;
pub mod swaptest;

pub use hierarchy::{CmaxTable, HierarchyTable, ProductStructure};
pub use lp::{solve_bell_lp, solve_cmax_lp, KrawtchoukMatrix, LpSolution};
pub use stabilizer::{Graph, StabilizerGroup, WeightEnumerator};
pub use statevec::{DensityMatrix, PureState, PurityVector, QuantumState, SubsetMask};
pub use swaptest::{BitstringDistribution, ExclusionLedger};
