mod common;

use centangle::haar::haar_experiment;
use centangle::hierarchy::{
    build_hierarchy, certify, certify_mixed, cp_rank_ce_bound_exact, geometric_measure_lower_bound, gme_threshold,
    haar_tail_bound, haar_tail_bound_exact, integer_partitions, mixed_cut_threshold, structure_bound, CmaxTable, HierarchyError,
    ProductStructure,
};
use centangle::rational::{q_frac, q_int, to_f64, Q};
use centangle::statevec::{ce_asymptotic_bound_exact, PureState, QuantumState};
use proptest::prelude::*;
use rand::Rng;
use std::sync::OnceLock;

fn table() -> &'static CmaxTable {
    static T: OnceLock<CmaxTable> = OnceLock::new();
    T.get_or_init(|| CmaxTable::from_lp(12).unwrap())
}

/// Number of integer partitions of `n` by the pentagonal recurrence.
fn partition_count(n: usize) -> usize {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[m] += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                p[m] += sign * p[m - g2];
            }
            k += 1;
        }
    }
    p[n] as usize
}

fn random_structure(n: usize, r: &mut impl Rng) -> ProductStructure {
    let mut left = n;
    let mut blocks = Vec::new();
    while left > 0 {
        let b = r.random_range(1..=left);
        blocks.push(b);
        left -= b;
    }
    ProductStructure::new(blocks).unwrap()
}

/// A random pure state with the given block structure, blocks laid out on
/// consecutive qubits.
fn product_of(s: &ProductStructure, seed: u64) -> PureState {
    let mut state: Option<PureState> = None;
    for (i, &b) in s.blocks().iter().enumerate() {
        let block = common::random_state(b, seed, i as u64);
        state = Some(match state {
            None => block,
            Some(prev) => prev.tensor(&block).unwrap(),
        });
    }
    state.unwrap()
}

#[test]
fn partitions_are_complete_and_distinct() {
    for n in 1..=12 {
        let parts = integer_partitions(n);
        assert_eq!(parts.len(), partition_count(n), "n={n}");
        let mut seen = std::collections::BTreeSet::new();
        for p in &parts {
            assert_eq!(p.n(), n);
            assert!(seen.insert(p.to_string()));
        }
    }
}

#[test]
fn thresholds_sit_between_and_below() {
    for n in 2..=12 {
        let zeta = gme_threshold(n, table()).unwrap();
        let cmax = table().get(n).unwrap().clone();
        assert!(zeta <= cmax, "n={n}");
        assert!(cmax <= ce_asymptotic_bound_exact(n), "n={n}");
        assert_eq!(build_hierarchy(n, table()).unwrap().gme_threshold(), zeta);
    }
}

#[test]
fn hierarchy_rows_sorted_and_bounded() {
    for n in 3..=12 {
        let h = build_hierarchy(n, table()).unwrap();
        assert_eq!(h.rows.len(), partition_count(n));
        for w in h.rows.windows(2) {
            assert!(w[0].zeta_star >= w[1].zeta_star);
        }
        assert_eq!(h.rows[0].structure.blocks(), &[n]);
        assert_eq!(h.rows.last().unwrap().zeta_star, q_int(0));
    }
}

#[test]
fn structure_parsing() {
    let s: ProductStructure = "2x3x1".parse().unwrap();
    assert_eq!(s.to_string(), "3x2x1");
    assert_eq!("3⊗2⊗1".parse::<ProductStructure>().unwrap(), s);
    assert_eq!("1,2,3".parse::<ProductStructure>().unwrap(), s);
    assert!("3x0".parse::<ProductStructure>().is_err());
    assert!("".parse::<ProductStructure>().is_err());
}

#[test]
fn boundary_value_is_not_excluded() {
    let h = build_hierarchy(5, table()).unwrap();
    let s: ProductStructure = "4x1".parse().unwrap();
    let z = to_f64(&h.find(&s).unwrap().zeta_star);
    let report = certify(z, &h).unwrap();
    assert!(report.surviving.contains(&s));
    assert!(matches!(certify(1.5, &h), Err(HierarchyError::InvalidCe(_))));
}

#[test]
fn cp_rank_bound_limits() {
    assert_eq!(cp_rank_ce_bound_exact(5, 3).unwrap(), q_frac(55, 96));
    assert_eq!(cp_rank_ce_bound_exact(4, 1).unwrap(), q_int(0));
    for n in 2..=12 {
        let huge = cp_rank_ce_bound_exact(n, 1 << n).unwrap();
        assert_eq!(huge, centangle::statevec::ame_bound_exact(n));
    }
}

#[test]
fn geometric_bound_shape() {
    let g = geometric_measure_lower_bound(0.5).unwrap();
    assert!((g.eg_lower - 0.125).abs() < 1e-15);
    assert!((g.lambda_max_upper - 0.875f64.sqrt()).abs() < 1e-15);
}

#[test]
fn tail_bound_dominates_monte_carlo() {
    assert!(matches!(haar_tail_bound(3, table()), Err(HierarchyError::VacuousTail { .. })));
    assert!(matches!(haar_tail_bound(4, table()), Err(HierarchyError::VacuousTail { .. })));
    for n in 5..=9 {
        let bound = haar_tail_bound(n, table()).unwrap();
        let s = haar_experiment(n, 4000, 500 + n as u64, table()).unwrap();
        assert!(s.frac_below_threshold.unwrap() <= bound, "n={n}");
    }
}

#[test]
fn tail_bound_shrinks_from_five_to_twelve() {
    let b: Vec<Q> = (5..=12).map(|n| haar_tail_bound_exact(n, table()).unwrap()).collect();
    for w in b.windows(2) {
        assert!(w[1] < w[0]);
    }
}

#[test]
fn certification_never_rejects_true_structure() {
    let mut r = common::rng(2024);
    let tables: Vec<_> = (0..=10)
        .map(|n| if n >= 2 { Some(build_hierarchy(n, table()).unwrap()) } else { None })
        .collect();
    for trial in 0..1000u64 {
        let n = r.random_range(2..=10usize);
        let s = random_structure(n, &mut r);
        // Fully separable states sit exactly on ζ* = 0, so strip rounding noise.
        let ce = (product_of(&s, trial).concentratable_entanglement().unwrap() - 1e-12).max(0.0);
        let report = certify(ce, tables[n].as_ref().unwrap()).unwrap();
        for u in integer_partitions(n).iter().filter(|u| s.refines(u)) {
            assert!(report.surviving.contains(u), "trial {trial}: {s} state excluded {u}");
        }
        if s.blocks().len() > 1 {
            assert!(!report.gme_certified, "trial {trial}: {s} certified GME");
        }
    }
}

#[test]
fn mixed_certification_sound_for_cut_mixtures() {
    let mut r = common::rng(99);
    for trial in 0..200u64 {
        let n = r.random_range(2..=5usize);
        let k = r.random_range(1..n);
        let term = |t: u64| {
            common::random_state(k, trial, 2 * t)
                .tensor(&common::random_state(n - k, trial, 2 * t + 1))
                .unwrap()
                .to_density()
        };
        let p: f64 = r.random();
        let rho = term(0).mix(&term(1), p).unwrap();
        let ce = rho.concentratable_entanglement().unwrap().clamp(0.0, 1.0);
        let purity = rho.total_purity().clamp(0.0, 1.0);
        assert!(!certify_mixed(ce, purity, n, k, table()).unwrap(), "trial {trial}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn refinement_is_monotone(n in 1usize..=12, seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let s = random_structure(n, &mut r);
        let mut blocks = s.blocks().to_vec();
        if blocks.len() > 1 {
            let i = r.random_range(0..blocks.len() - 1);
            let merged = blocks.remove(i) + blocks.remove(i);
            blocks.push(merged);
        }
        let coarse = ProductStructure::new(blocks).unwrap();
        prop_assert!(s.refines(&coarse));
        prop_assert!(structure_bound(&s, table()).unwrap() <= structure_bound(&coarse, table()).unwrap());
    }

    #[test]
    fn structure_bound_composes(n in 2usize..=12, seed in any::<u64>()) {
        let s = random_structure(n, &mut common::rng(seed));
        let want = s.blocks().iter().fold(q_int(0), |acc: Q, &b| {
            let c = table().get(b).unwrap();
            &acc + c - &acc * c
        });
        prop_assert_eq!(structure_bound(&s, table()).unwrap(), want);
    }

    #[test]
    fn pure_purity_reduces_mixed_threshold(n in 2usize..=12, k_seed in any::<usize>()) {
        let k = 1 + k_seed % (n - 1);
        let pure = structure_bound(&ProductStructure::new(vec![k, n - k]).unwrap(), table()).unwrap();
        prop_assert_eq!(mixed_cut_threshold(1.0, n, k, table()).unwrap(), pure);
    }
}
