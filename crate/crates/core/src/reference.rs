//! Published reference values and shipped witness graphs, embedded at build
//! time so the CLI can diff regenerated tables against them.

use serde::Deserialize;

pub const TABLE1_CSV: &str = include_str!("../testdata/expected/table1.csv");
pub const TABLE2_CSV: &str = include_str!("../testdata/expected/table2.csv");
pub const SM_LP_CSV: &str = include_str!("../testdata/expected/sm_lp.csv");
pub const WITNESS_GRAPHS_JSON: &str = include_str!("../data/witness_graphs.json");

const HIERARCHY_CSV: [&str; 10] = [
    include_str!("../testdata/expected/hierarchy_n3.csv"),
    include_str!("../testdata/expected/hierarchy_n4.csv"),
    include_str!("../testdata/expected/hierarchy_n5.csv"),
    include_str!("../testdata/expected/hierarchy_n6.csv"),
    include_str!("../testdata/expected/hierarchy_n7.csv"),
    include_str!("../testdata/expected/hierarchy_n8.csv"),
    include_str!("../testdata/expected/hierarchy_n9.csv"),
    include_str!("../testdata/expected/hierarchy_n10.csv"),
    include_str!("../testdata/expected/hierarchy_n11.csv"),
    include_str!("../testdata/expected/hierarchy_n12.csv"),
];

/// Expected hierarchy for `3 ≤ n ≤ 12` as `structure,zeta_star` CSV.
pub fn hierarchy_csv(n: usize) -> Option<&'static str> {
    (3..=12).contains(&n).then(|| HIERARCHY_CSV[n - 3])
}

/// Data rows of a CSV with a header line, split on commas.
pub fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|c| c.trim().to_string()).collect())
        .collect()
}

/// `(n, C*(n), ζ(n))` as printed.
pub fn table1() -> Vec<(usize, String, String)> {
    csv_rows(TABLE1_CSV)
        .into_iter()
        .map(|r| (r[0].parse().expect("integer n"), r[1].clone(), r[2].clone()))
        .collect()
}

/// `(n, printed C*(n) bound)` for `n = 2..=31`.
pub fn sm_lp() -> Vec<(usize, String)> {
    csv_rows(SM_LP_CSV)
        .into_iter()
        .map(|r| (r[0].parse().expect("integer n"), r[1].clone()))
        .collect()
}

/// `(structure, ζ*)` rows.
pub fn hierarchy(n: usize) -> Option<Vec<(String, String)>> {
    hierarchy_csv(n).map(|t| {
        csv_rows(t)
            .into_iter()
            .map(|r| (r[0].clone(), r[1].clone()))
            .collect()
    })
}

pub fn table2() -> Vec<(String, String)> {
    csv_rows(TABLE2_CSV)
        .into_iter()
        .map(|r| (r[0].clone(), r[1].clone()))
        .collect()
}

/// A graph whose graph state reaches the LP value, with that CE as `p/q`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct WitnessGraph {
    pub n: usize,
    pub ce: String,
    pub edges: Vec<[usize; 2]>,
}

pub fn witness_graphs() -> Vec<WitnessGraph> {
    serde_json::from_str(WITNESS_GRAPHS_JSON).expect("embedded witness file is valid")
}
