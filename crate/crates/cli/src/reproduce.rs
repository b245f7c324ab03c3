use centangle::haar::{haar_experiment, haar_moments_exact};
use centangle::hierarchy::{build_hierarchy, gme_threshold, haar_tail_bound_exact, CmaxTable};
use centangle::rational::{matches_printed, parse_decimal, printed_digits, to_fixed, Q};
use centangle::reference;
use centangle::statevec::ce_asymptotic_bound_exact;
use serde_json::json;

use crate::commands::{cmax_table, haar_json, hierarchy_csv, write};
use crate::render::{decimal, document};
use crate::{invalid, Cli, CliError, Target};

type Result<T> = std::result::Result<T, CliError>;

/// Outcome of one target: the summary line and any differences found.
struct Outcome {
    summary: String,
    diffs: Vec<String>,
}

pub fn run(cli: &Cli, target: Target) -> Result<String> {
    let targets = match target {
        Target::All => vec![
            Target::Table1,
            Target::Table2,
            Target::SmLp,
            Target::SmHierarchies,
            Target::Fig2,
            Target::Fig3,
        ],
        t => vec![t],
    };
    let mut report = String::new();
    let mut failed = false;
    for t in targets {
        let o = match t {
            Target::Table1 => table1(cli)?,
            Target::Table2 => table2(cli)?,
            Target::SmLp => sm_lp(cli)?,
            Target::SmHierarchies => sm_hierarchies(cli)?,
            Target::Fig2 => fig2(cli)?,
            Target::Fig3 => fig3(cli)?,
            Target::All => unreachable!(),
        };
        let status = if o.diffs.is_empty() { "ok" } else { "MISMATCH" };
        report.push_str(&format!("{status} {}\n", o.summary));
        for d in &o.diffs {
            report.push_str(&format!("  {d}\n"));
        }
        failed |= !o.diffs.is_empty();
    }
    if failed {
        Err(CliError::Mismatch(report))
    } else {
        Ok(report)
    }
}

fn dec(s: &str) -> Q {
    parse_decimal(s).expect("reference values are decimals")
}

fn table1(cli: &Cli) -> Result<Outcome> {
    let t = cmax_table(12)?;
    let mut csv = String::from("n,cmax,zeta\n");
    let mut diffs = Vec::new();
    let expected = reference::table1();
    for (n, cmax, zeta) in &expected {
        let c = t.get(*n).expect("table covers 2..=12").clone();
        let z = gme_threshold(*n, &t).map_err(invalid)?;
        csv.push_str(&format!("{n},{},{}\n", decimal(&c), decimal(&z)));
        if c != dec(cmax) {
            diffs.push(format!("n={n}: C* {} != {cmax}", decimal(&c)));
        }
        if z != dec(zeta) {
            diffs.push(format!("n={n}: zeta {} != {zeta}", decimal(&z)));
        }
    }
    let path = cli.out.join("table1.csv");
    write(&path, &csv)?;
    Ok(Outcome {
        summary: format!("table1: {} rows -> {}", expected.len(), path.display()),
        diffs,
    })
}

fn table2(cli: &Cli) -> Result<Outcome> {
    let h = build_hierarchy(5, &cmax_table(5)?).map_err(invalid)?;
    let expected = reference::table2();
    let mut csv = String::from("structure,zeta_star\n");
    let mut diffs = Vec::new();
    for r in &h.rows {
        csv.push_str(&format!("{},{}\n", r.structure, decimal(&r.zeta_star)));
    }
    if h.rows.len() != expected.len() {
        diffs.push(format!("{} rows, expected {}", h.rows.len(), expected.len()));
    }
    for (r, (s, v)) in h.rows.iter().zip(&expected) {
        if r.structure.to_string() != *s || r.zeta_star != dec(v) {
            diffs.push(format!("{} {} != {s} {v}", r.structure, decimal(&r.zeta_star)));
        }
    }
    let path = cli.out.join("table2.csv");
    write(&path, &csv)?;
    Ok(Outcome {
        summary: format!("table2: {} rows -> {}", h.rows.len(), path.display()),
        diffs,
    })
}

fn sm_lp(cli: &Cli) -> Result<Outcome> {
    let expected = reference::sm_lp();
    let mut csv = String::from("n,cmax\n");
    let mut diffs = Vec::new();
    for (n, printed) in &expected {
        let bound = centangle::lp::solve_cmax_lp(*n).map_err(invalid)?.cmax_bound();
        let rendered = to_fixed(&bound, printed_digits(printed));
        csv.push_str(&format!("{n},{rendered}\n"));
        if !matches_printed(&bound, printed) {
            diffs.push(format!("n={n}: {rendered} != {printed} (exact {})", to_fixed(&bound, printed_digits(printed) + 4)));
        }
    }
    let path = cli.out.join("sm_lp.csv");
    write(&path, &csv)?;
    Ok(Outcome {
        summary: format!("sm_lp: {} values -> {}", expected.len(), path.display()),
        diffs,
    })
}

fn sm_hierarchies(cli: &Cli) -> Result<Outcome> {
    let t = cmax_table(12)?;
    let mut diffs = Vec::new();
    let mut rows = 0;
    for n in 3..=12 {
        let csv = hierarchy_csv(n, &t)?;
        write(&cli.out.join(format!("hierarchy_n{n}.csv")), &csv)?;
        let got = reference::csv_rows(&csv);
        let expected = reference::hierarchy(n).expect("reference covers 3..=12");
        if got.len() != expected.len() {
            diffs.push(format!("n={n}: {} rows, expected {}", got.len(), expected.len()));
        }
        for (g, (s, v)) in got.iter().zip(&expected) {
            if g[0] != *s || dec(&g[1]) != dec(v) {
                diffs.push(format!("n={n}: {} {} != {s} {v}", g[0], g[1]));
            }
        }
        rows += got.len();
    }
    Ok(Outcome {
        summary: format!("sm_hierarchies: {rows} rows for n = 3..12 -> {}", cli.out.display()),
        diffs,
    })
}

fn fig2(cli: &Cli) -> Result<Outcome> {
    let t = cmax_table(7)?;
    let mut diffs = Vec::new();
    let mut stats = Vec::new();
    for n in 4..=7 {
        let s = haar_experiment(n, 6000, cli.seed, &t).map_err(invalid)?;
        write(&cli.out.join(format!("fig2_hist_n{n}.csv")), &s.histogram(50).to_csv())?;
        let z = (s.mean_emp - s.mean_closed).abs() / s.standard_error();
        let ratio = s.var_emp / s.var_closed;
        if z > 5.0 {
            diffs.push(format!("n={n}: mean {:.6} is {z:.2} SE from {:.6}", s.mean_emp, s.mean_closed));
        }
        if !(0.7..=1.4).contains(&ratio) {
            diffs.push(format!("n={n}: variance ratio {ratio:.3} outside [0.7, 1.4]"));
        }
        if n == 5 && s.frac_above_ghz <= 0.5 {
            diffs.push(format!("n=5: only {:.3} of samples exceed the GHZ value", s.frac_above_ghz));
        }
        stats.push(haar_json(&s, cli.seed));
    }
    write(&cli.out.join("fig2_stats.json"), &document(json!({ "stats": stats })))?;
    Ok(Outcome {
        summary: format!("fig2: 4 x 6000 samples -> {}", cli.out.display()),
        diffs,
    })
}

fn fig3(cli: &Cli) -> Result<Outcome> {
    let max_n = cli.max_n.unwrap_or(12);
    if !(5..=31).contains(&max_n) {
        return Err(invalid(format!("fig3 needs 5 <= max-n <= 31, got {max_n}")));
    }
    let t: CmaxTable = cmax_table(max_n)?;
    let mut csv = String::from("n,cmax,zeta,haar_mean,asymptotic,tail_bound\n");
    let mut diffs = Vec::new();
    let mut prev_tail: Option<Q> = None;
    for n in 2..=max_n {
        let c = t.get(n).expect("table covers n").clone();
        let z = gme_threshold(n, &t).map_err(invalid)?;
        let (mean, _) = haar_moments_exact(n);
        let asym = ce_asymptotic_bound_exact(n);
        let tail = haar_tail_bound_exact(n, &t).ok();
        csv.push_str(&format!(
            "{n},{},{},{},{},{}\n",
            to_fixed(&c, 12),
            to_fixed(&z, 12),
            to_fixed(&mean, 12),
            to_fixed(&asym, 12),
            tail.as_ref().map(|q| format!("{:e}", centangle::rational::to_f64(q))).unwrap_or_default()
        ));
        if !(z <= c && c <= asym) {
            diffs.push(format!("n={n}: ordering zeta <= C* <= 1-(3/4)^n fails"));
        }
        if n >= 5 {
            match (&tail, &prev_tail) {
                (None, _) => diffs.push(format!("n={n}: tail bound vacuous")),
                (Some(b), Some(p)) if n <= 12 && b >= p => diffs.push(format!("n={n}: tail bound did not decrease")),
                _ => {}
            }
        }
        prev_tail = tail;
    }
    let path = cli.out.join("fig3.csv");
    write(&path, &csv)?;
    Ok(Outcome {
        summary: format!("fig3: n = 2..{max_n} -> {}", path.display()),
        diffs,
    })
}
