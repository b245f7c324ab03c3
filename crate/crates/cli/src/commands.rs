use std::fs;
use std::path::Path;

use centangle::haar::haar_experiment;
use centangle::hierarchy::{
    build_hierarchy, certify, lp_value_achieved, mixed_cut_threshold, CertificationReport, CmaxTable,
};
use centangle::lp::{
    check_coding_bound_bn, coding_bound_moment, krawtchouk, solve_bell_lp, solve_cmax_lp, BellDualCertificate,
    BoundCheck, Enumerators,
};
use centangle::rational::{parse_rational, q_int, Q};
use centangle::stabilizer::{
    enumerate_weights, graph_ce, graph_state_group, search_graph_states, verify_extremal_claims, CodeType, Graph,
    SearchMode,
};
use centangle::statevec::{parse_state_json, AnyState, QuantumState, ResourceCaps};
use centangle::swaptest::{bitstring_distribution, empirical_bell_pairs, sample_bitstrings, ExclusionLedger};
use serde_json::{json, Value};

use crate::render::{decimal, document, exact, rational};
use crate::{invalid, Cli, CliError, Command, Format, GraphCommand, LpCommand};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Ce { state, distribution } => cmd_ce(cli, state, *distribution),
        Command::Swaptest { state, shots, samples } => cmd_swaptest(cli, state, *shots, samples.as_deref()),
        Command::Hierarchy { n } => cmd_hierarchy(cli, *n),
        Command::Certify { n, ce, purity } => cmd_certify(*n, *ce, *purity),
        Command::Lp(lp) => cmd_lp(cli, lp),
        Command::Graph(g) => cmd_graph(cli, g),
        Command::Haar { n, samples, hist, bins } => cmd_haar(cli, *n, *samples, hist.as_deref(), *bins),
        Command::Reproduce { target } => crate::reproduce::run(cli, *target),
    }
}

fn caps(cli: &Cli) -> ResourceCaps {
    let mut caps = ResourceCaps::default();
    if let Some(m) = cli.max_n {
        caps.max_pure_qubits = m;
    }
    caps
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)?;
    Ok(())
}

fn load_state(path: &Path) -> Result<AnyState> {
    parse_state_json(&read(path)?).map_err(invalid)
}

pub fn cmax_table(max_n: usize) -> Result<CmaxTable> {
    CmaxTable::from_lp(max_n.max(2)).map_err(invalid)
}

fn report_json(r: &CertificationReport) -> Value {
    json!({
        "n": r.n,
        "ce": r.ce,
        "gme_threshold": exact(&r.gme_threshold),
        "gme_certified": r.gme_certified,
        "excluded": r.excluded.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "surviving": r.surviving.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    })
}

fn cmd_ce(cli: &Cli, path: &Path, distribution: bool) -> Result<String> {
    let state = load_state(path)?;
    let n = state.num_qubits();
    let pv = state.purity_vector_with_caps(&caps(cli)).map_err(invalid)?;
    let ce = pv.concentratable_entanglement();
    let nontrivial = &pv.values()[1..pv.values().len() - 1];
    let certification = if n >= 2 {
        let table = build_hierarchy(n, &cmax_table(n)?).map_err(invalid)?;
        report_json(&certify(ce.clamp(0.0, 1.0), &table).map_err(invalid)?)
    } else {
        Value::Null
    };
    let mut doc = json!({
        "n": n,
        "kind": match state { AnyState::Pure(_) => "pure", AnyState::Mixed(_) => "mixed" },
        "ce": ce,
        "purities": {
            "total": pv.values()[pv.values().len() - 1],
            "single_qubit_sum": pv.single_qubit_sum(),
            "min_proper_subset": nontrivial.iter().copied().fold(f64::INFINITY, f64::min),
            "max_proper_subset": nontrivial.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        },
        "certification": certification,
    });
    if distribution {
        let d = bitstring_distribution(&pv);
        doc["distribution"] = json!(d.probs());
    }
    if cli.format == Some(Format::Text) {
        return Ok(format!("{ce}\n"));
    }
    Ok(document(doc))
}

fn cmd_swaptest(cli: &Cli, path: &Path, shots: usize, samples_path: Option<&Path>) -> Result<String> {
    let state = load_state(path)?;
    let n = state.num_qubits();
    let pv = state.purity_vector_with_caps(&caps(cli)).map_err(invalid)?;
    let dist = bitstring_distribution(&pv);
    let samples = sample_bitstrings(&dist, shots, cli.seed).map_err(invalid)?;
    let ledger = ExclusionLedger::new(n).record_all(&samples).map_err(invalid)?;
    let (bell_mean, bell_var) = empirical_bell_pairs(&samples).map_err(invalid)?;
    let zeros = samples.iter().filter(|z| z.bits() == 0).count();
    let default_path = cli.out.join("swaptest_samples.txt");
    let out_path = samples_path.unwrap_or(&default_path);
    let mut text = String::with_capacity(samples.len() * (n + 1));
    for z in &samples {
        text.push_str(&z.to_string());
        text.push('\n');
    }
    write(out_path, &text)?;
    Ok(document(json!({
        "n": n,
        "shots": shots,
        "seed": cli.seed,
        "ce_estimate": 1.0 - zeros as f64 / shots as f64,
        "ce_exact": pv.concentratable_entanglement(),
        "p0": dist.p_all_pass(),
        "excluded_rank": ledger.rank(),
        "surviving_bipartitions": ledger.surviving_bipartitions(),
        "excluded_bipartitions": ledger
            .excluded_bipartitions()
            .iter()
            .map(|m| m.qubits().collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "bell_mean": bell_mean,
        "bell_variance": bell_var,
        "samples_path": out_path.display().to_string(),
    })))
}

pub fn hierarchy_csv(n: usize, table: &CmaxTable) -> Result<String> {
    let h = build_hierarchy(n, table).map_err(invalid)?;
    let mut s = String::from("structure,zeta_star\n");
    for row in &h.rows {
        s.push_str(&format!("{},{}\n", row.structure, decimal(&row.zeta_star)));
    }
    Ok(s)
}

fn cmd_hierarchy(cli: &Cli, n: usize) -> Result<String> {
    let table = cmax_table(n)?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv | Format::Text => hierarchy_csv(n, &table),
        Format::Json => {
            let h = build_hierarchy(n, &table).map_err(invalid)?;
            let rows: Vec<Value> = h
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "structure": r.structure.to_string(),
                        "zeta_star": exact(&r.zeta_star),
                        "loose": r.loose,
                    })
                })
                .collect();
            Ok(document(json!({
                "n": n,
                "gme_threshold": exact(&h.gme_threshold()),
                "rows": rows,
            })))
        }
    }
}

fn cmd_certify(n: usize, ce: f64, purity: Option<f64>) -> Result<String> {
    let cmax = cmax_table(n)?;
    let Some(p) = purity else {
        let table = build_hierarchy(n, &cmax).map_err(invalid)?;
        return Ok(document(report_json(&certify(ce, &table).map_err(invalid)?)));
    };
    if !(0.0..=1.0).contains(&ce) {
        return Err(invalid(format!("CE {ce} is outside [0, 1]")));
    }
    let exact_ce = centangle::rational::from_f64(ce).ok_or_else(|| invalid(format!("CE {ce}")))?;
    let cuts: Vec<Value> = (1..=n / 2)
        .map(|k| {
            let t = mixed_cut_threshold(p, n, k, &cmax).map_err(invalid)?;
            Ok(json!({
                "cut": format!("{}|{}", n - k, k),
                "threshold": centangle::rational::to_f64(&t),
                "excluded": exact_ce > t,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(document(json!({ "n": n, "ce": ce, "purity": p, "cuts": cuts })))
}

fn bound_json(b: &BoundCheck) -> Value {
    json!({
        "form": format!("{:?}", b.form),
        "lhs": exact(&b.lhs),
        "rhs": exact(&b.rhs),
        "holds": b.holds,
    })
}

fn parse_enumerator(arg: &str) -> Result<Vec<Q>> {
    let text = if Path::new(arg).is_file() { read(Path::new(arg))? } else { arg.to_string() };
    let values: Vec<Value> = serde_json::from_str(&text).map_err(|e| invalid(format!("enumerator: {e}")))?;
    values
        .iter()
        .map(|v| match v {
            Value::Number(x) => x
                .as_i64()
                .map(q_int)
                .ok_or_else(|| invalid(format!("enumerator entry {x} is not an integer"))),
            Value::String(s) => parse_rational(s).ok_or_else(|| invalid(format!("enumerator entry {s:?}"))),
            other => Err(invalid(format!("enumerator entry {other}"))),
        })
        .collect()
}

fn cmd_lp(cli: &Cli, cmd: &LpCommand) -> Result<String> {
    match cmd {
        LpCommand::Cmax { n, rational: as_rational } => {
            let sol = solve_cmax_lp(*n).map_err(invalid)?;
            let bound = sol.cmax_bound();
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => Ok(document(json!({
                    "n": n,
                    "cmax_bound": exact(&bound),
                    "lp_minimum": exact(&sol.optimal_value),
                    "achieved_by_stabilizer_state": lp_value_achieved(*n),
                    "y": sol.y.iter().map(rational).collect::<Vec<_>>(),
                }))),
                _ if *as_rational => Ok(format!("{}\n", rational(&bound))),
                _ => Ok(format!("{}\n", decimal(&bound))),
            }
        }
        LpCommand::Bell { n } => {
            let sol = solve_bell_lp(*n).map_err(invalid)?;
            let cert = BellDualCertificate::new(&krawtchouk(*n));
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => Ok(document(json!({
                    "n": n,
                    "optimum": exact(&sol.optimal_value),
                    "certificate": {
                        "nu": rational(&cert.nu),
                        "lambda": cert.lambda.iter().map(rational).collect::<Vec<_>>(),
                        "value": exact(&cert.value()),
                        "feasible": cert.is_feasible(),
                        "tight": cert.is_tight(),
                    },
                }))),
                _ => Ok(format!(
                    "optimum {}\ndual certificate: value {}, feasible {}, tight {}\n",
                    rational(&sol.optimal_value),
                    rational(&cert.value()),
                    cert.is_feasible(),
                    cert.is_tight()
                )),
            }
        }
        LpCommand::Bound { n, k, a } => {
            let a = parse_enumerator(a)?;
            let enums = Enumerators::from_a(a, *n, *k).map_err(invalid)?;
            let l = solve_cmax_lp(*n).map_err(invalid)?.optimal_value;
            Ok(document(json!({
                "n": n,
                "k": k,
                "b": enums.b.iter().map(rational).collect::<Vec<_>>(),
                "lp_minimum": exact(&l),
                "bn_bound": bound_json(&check_coding_bound_bn(&enums, &l)),
                "moment_bound": bound_json(&coding_bound_moment(&enums)),
            })))
        }
    }
}

fn graph_json(g: &Graph) -> Value {
    json!({
        "n": g.n(),
        "edges": g.edges().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
    })
}

fn cmd_graph(cli: &Cli, cmd: &GraphCommand) -> Result<String> {
    match cmd {
        GraphCommand::Ce { graph } => {
            let g = Graph::from_json(&read(graph)?).map_err(invalid)?;
            let ce = graph_ce(&g).map_err(invalid)?;
            let we = enumerate_weights(&graph_state_group(&g)).map_err(invalid)?;
            let code = verify_extremal_claims(&graph_state_group(&g), None).map_err(invalid)?;
            Ok(document(json!({
                "graph": graph_json(&g),
                "ce": exact(&ce),
                "weight_enumerator": we.a,
                "distance": code.distance,
                "code_type": match code.code_type { CodeType::TypeI => "I", CodeType::TypeII => "II" },
                "distance_bound": code.distance_bound,
                "extremal": code.extremal,
            })))
        }
        GraphCommand::Search { n, exhaustive, random, iters, restarts } => {
            let mode = if *random || (!*exhaustive && *n > centangle::stabilizer::MAX_EXHAUSTIVE_QUBITS) {
                SearchMode::Random { seed: cli.seed, iterations: *iters, restarts: *restarts }
            } else {
                SearchMode::Exhaustive
            };
            let r = search_graph_states(*n, mode).map_err(invalid)?;
            let bound = solve_cmax_lp(*n).ok().map(|s| s.cmax_bound());
            Ok(document(json!({
                "n": n,
                "mode": match mode { SearchMode::Exhaustive => "exhaustive", SearchMode::Random { .. } => "random" },
                "best_ce": exact(&r.best_ce),
                "witness": graph_json(&r.witness),
                "evaluated": r.evaluated,
                "lp_bound": bound.as_ref().map(exact),
                "reaches_lp_bound": bound.map(|b| b == r.best_ce),
            })))
        }
    }
}

pub fn haar_json(s: &centangle::haar::HaarStats, seed: u64) -> Value {
    json!({
        "n": s.n,
        "samples": s.samples,
        "seed": seed,
        "mean_closed": s.mean_closed,
        "var_closed": s.var_closed,
        "mean_emp": s.mean_emp,
        "var_emp": s.var_emp,
        "standard_error": s.standard_error(),
        "gme_threshold": s.threshold,
        "frac_below_threshold": s.frac_below_threshold,
        "frac_above_ghz": s.frac_above_ghz,
    })
}

fn cmd_haar(cli: &Cli, n: usize, samples: usize, hist: Option<&Path>, bins: usize) -> Result<String> {
    let limit = caps(cli).max_pure_qubits;
    if n == 0 || n > limit {
        return Err(invalid(format!("n = {n} is outside 1..={limit}")));
    }
    let stats = haar_experiment(n, samples, cli.seed, &cmax_table(n)?).map_err(invalid)?;
    if let Some(path) = hist {
        write(path, &stats.histogram(bins).to_csv())?;
    }
    Ok(document(haar_json(&stats, cli.seed)))
}
