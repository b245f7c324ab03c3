mod common;

use centangle::lp::{macwilliams, solve_cmax_lp};
use centangle::rational::{parse_rational, to_f64, Q};
use centangle::reference;
use centangle::stabilizer::{
    ce_from_enumerator, distance_bound, enumerate_weights, graph_ce, graph_state_group, graph_state_vector,
    random_graph, search_graph_states, search_graph_states_until, verify_extremal_claims, CodeType, Graph,
    PauliString, SearchMode, StabilizerError, StabilizerGroup,
};
use centangle::statevec::QuantumState;
use proptest::prelude::*;

fn witness(w: &reference::WitnessGraph) -> Graph {
    let edges: Vec<(usize, usize)> = w.edges.iter().map(|e| (e[0], e[1])).collect();
    Graph::new(w.n, &edges).unwrap()
}

fn ring(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    Graph::new(n, &edges).unwrap()
}

/// Explicit generator matrix multiply over all `2^n` subsets, counting
/// supports; slow and independent of the Gray-code walk.
fn naive_weights(g: &StabilizerGroup) -> Vec<u64> {
    let n = g.n();
    let gens = g.generators();
    let mut a = vec![0u64; n + 1];
    for s in 0u32..1 << gens.len() {
        let mut p = PauliString::identity(n);
        for (i, gen) in gens.iter().enumerate() {
            if s >> i & 1 == 1 {
                p = p.mul(gen);
            }
        }
        a[p.weight() as usize] += 1;
    }
    a
}

#[test]
fn pauli_algebra() {
    let x: PauliString = "X".parse().unwrap();
    let z: PauliString = "Z".parse().unwrap();
    let y: PauliString = "Y".parse().unwrap();
    assert!(!x.commutes_with(&z));
    assert_eq!(x.mul(&z).to_string(), "-iY");
    assert_eq!(z.mul(&x).to_string(), "+iY");
    assert_eq!(y.mul(&y).to_string(), "+I");
    let xx: PauliString = "XX".parse().unwrap();
    let zz: PauliString = "ZZ".parse().unwrap();
    assert!(xx.commutes_with(&zz));
    assert_eq!(xx.mul(&zz).to_string(), "-YY");
    assert_eq!("-iXYZ".parse::<PauliString>().unwrap().to_string(), "-iXYZ");
    assert!("XQ".parse::<PauliString>().is_err());
}

#[test]
fn group_validation() {
    let p = |s: &str| s.parse::<PauliString>().unwrap();
    assert!(matches!(
        StabilizerGroup::new(2, vec![p("XI"), p("ZI")]),
        Err(StabilizerError::Anticommuting(0, 1))
    ));
    assert!(matches!(
        StabilizerGroup::new(2, vec![p("XX"), p("XX")]),
        Err(StabilizerError::Dependent)
    ));
    let bell = StabilizerGroup::new(2, vec![p("XX"), p("ZZ")]).unwrap();
    assert!(bell.is_full_rank());
    assert_eq!(enumerate_weights(&bell).unwrap().a, vec![1, 0, 3]);
    assert_eq!(ce_from_enumerator(&enumerate_weights(&bell).unwrap()).unwrap(), parse_rational("1/4").unwrap());
}

#[test]
fn graph_round_trips() {
    let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    assert_eq!(Graph::from_edge_mask(4, g.edge_mask()).unwrap(), g);
    assert_eq!(Graph::pair_list(3), vec![(0, 1), (0, 2), (1, 2)]);
    assert!(matches!(Graph::new(3, &[(1, 1)]), Err(StabilizerError::SelfLoop(1))));
    assert!(matches!(Graph::new(3, &[(0, 3)]), Err(StabilizerError::VertexOutOfRange { .. })));
}

#[test]
fn five_qubit_code() {
    let r = verify_extremal_claims(&graph_state_group(&ring(5)), Some(3)).unwrap();
    assert_eq!(r.distance, 3);
    assert_eq!(r.code_type, CodeType::TypeI);
    assert_eq!(r.distance_bound, 3);
    assert!(r.extremal);
    assert_eq!(r.claim_matches, Some(true));
    assert_eq!(r.enumerator.a, vec![1, 0, 0, 10, 15, 6]);
    assert_eq!(graph_ce(&ring(5)).unwrap(), parse_rational("5/8").unwrap());
}

#[test]
fn distance_ceilings() {
    let t1: Vec<usize> = (1..=13).map(|n| distance_bound(n, CodeType::TypeI)).collect();
    assert_eq!(t1, vec![2, 2, 2, 2, 3, 3, 4, 4, 4, 4, 5, 5, 6]);
    let t2: Vec<usize> = (2..=12).step_by(2).map(|n| distance_bound(n, CodeType::TypeII)).collect();
    assert_eq!(t2, vec![2, 2, 4, 4, 4, 6]);
}

#[test]
fn witnesses_reach_lp_value_by_both_routes() {
    let ws = reference::witness_graphs();
    assert_eq!(ws.iter().map(|w| w.n).collect::<Vec<_>>(), vec![8, 9, 10, 11, 12]);
    for w in &ws {
        let g = witness(w);
        let claimed: Q = parse_rational(&w.ce).unwrap();
        assert_eq!(graph_ce(&g).unwrap(), claimed, "n={}", w.n);
        assert_eq!(claimed, solve_cmax_lp(w.n).unwrap().cmax_bound(), "n={}", w.n);
        let sv = graph_state_vector(&g).unwrap().concentratable_entanglement().unwrap();
        assert!((sv - to_f64(&claimed)).abs() < 1e-9, "n={}", w.n);
    }
}

#[test]
fn witness_codes_are_extremal() {
    let got: Vec<(usize, usize, CodeType, bool)> = reference::witness_graphs()
        .iter()
        .map(|w| {
            let r = verify_extremal_claims(&graph_state_group(&witness(w)), None).unwrap();
            (w.n, r.distance, r.code_type, r.extremal)
        })
        .collect();
    assert_eq!(
        got,
        vec![
            (8, 4, CodeType::TypeI, true),
            (9, 4, CodeType::TypeI, true),
            (10, 4, CodeType::TypeI, true),
            (11, 5, CodeType::TypeI, true),
            (12, 6, CodeType::TypeII, true),
        ]
    );
}

#[test]
fn exhaustive_search_agrees_with_statevector_scan() {
    for n in 2..=4 {
        let best = search_graph_states(n, SearchMode::Exhaustive).unwrap();
        let pairs = Graph::pair_list(n).len();
        let mut scan: Option<(f64, u64)> = None;
        for m in 0..1u64 << pairs {
            let c = graph_state_vector(&Graph::from_edge_mask(n, m).unwrap())
                .unwrap()
                .concentratable_entanglement()
                .unwrap();
            if scan.is_none_or(|(b, _)| c > b + 1e-12) {
                scan = Some((c, m));
            }
        }
        let (c, m) = scan.unwrap();
        assert!((to_f64(&best.best_ce) - c).abs() < 1e-12, "n={n}");
        assert_eq!(best.witness.edge_mask(), m, "n={n}");
    }
    assert!(matches!(
        search_graph_states(8, SearchMode::Exhaustive),
        Err(StabilizerError::ExhaustiveTooLarge(8))
    ));
}

#[test]
fn random_search_is_reproducible_and_stops_at_target() {
    let mode = SearchMode::Random { seed: 3, iterations: 2000, restarts: 2 };
    assert_eq!(search_graph_states(6, mode).unwrap(), search_graph_states(6, mode).unwrap());
    let target = solve_cmax_lp(6).unwrap().cmax_bound();
    let r = search_graph_states_until(6, SearchMode::Random { seed: 0, iterations: 50_000, restarts: 4 }, Some(&target))
        .unwrap();
    assert_eq!(r.best_ce, target);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerator_matches_statevector(n in 2usize..=10, seed in any::<u64>()) {
        let g = random_graph(n, &mut common::rng(seed)).unwrap();
        let exact = graph_ce(&g).unwrap();
        let sv = graph_state_vector(&g).unwrap().concentratable_entanglement().unwrap();
        prop_assert!((to_f64(&exact) - sv).abs() < 1e-9);
    }

    #[test]
    fn gray_walk_matches_naive_sum(n in 1usize..=9, seed in any::<u64>()) {
        let g = common::random_stabilizer_group(n, &mut common::rng(seed));
        prop_assert_eq!(enumerate_weights(&g).unwrap().a, naive_weights(&g));
    }

    #[test]
    fn enumerator_is_self_dual(n in 1usize..=12, seed in any::<u64>()) {
        let g = common::random_stabilizer_group(n, &mut common::rng(seed));
        let a = enumerate_weights(&g).unwrap().as_rationals();
        prop_assert_eq!(macwilliams(&a, n, 0).unwrap(), a);
    }

    #[test]
    fn local_complementation_preserves_ce(n in 2usize..=10, v_seed in any::<usize>(), seed in any::<u64>()) {
        let g = random_graph(n, &mut common::rng(seed)).unwrap();
        let lc = g.local_complement(v_seed % n).unwrap();
        prop_assert_eq!(graph_ce(&g).unwrap(), graph_ce(&lc).unwrap());
        prop_assert_eq!(enumerate_weights(&graph_state_group(&g)).unwrap().a, enumerate_weights(&graph_state_group(&lc)).unwrap().a);
    }

    #[test]
    fn group_size_and_purity_sum(n in 1usize..=10, seed in any::<u64>()) {
        let we = enumerate_weights(&common::random_stabilizer_group(n, &mut common::rng(seed))).unwrap();
        prop_assert_eq!(we.a.iter().sum::<u64>(), we.group_size());
        prop_assert_eq!(we.a[0], 1);
    }
}
