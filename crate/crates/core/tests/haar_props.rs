mod common;

use centangle::haar::{haar_experiment, haar_moments, haar_moments_exact, sample_haar_state, HaarError, Histogram};
use centangle::hierarchy::CmaxTable;
use centangle::rational::{q_frac, q_int, q_pow, Q};
use centangle::statevec::ce_upper_bound_ame;

fn table() -> CmaxTable {
    CmaxTable::from_lp(9).unwrap()
}

/// Haar average of `Tr ρ_α²` for a `k`-qubit subsystem, `(d_A + d_B)/(d_A d_B + 1)`,
/// summed over all subsets to get the CE mean.
fn mean_oracle(n: usize) -> Q {
    let d = q_pow(2, n as i32);
    let mut sum = q_int(0);
    for k in 0..=n {
        let da = q_pow(2, k as i32);
        let db = q_pow(2, (n - k) as i32);
        let binom: i64 = (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64);
        sum += q_int(binom) * (&da + &db) / (&d + q_int(1));
    }
    q_int(1) - sum / d
}

#[test]
fn closed_mean_matches_subsystem_average() {
    for n in 1..=20 {
        assert_eq!(haar_moments_exact(n).0, mean_oracle(n), "n={n}");
    }
    assert_eq!(haar_moments_exact(2).0, q_frac(1, 10));
}

#[test]
fn sample_bands_three_to_seven() {
    for n in 3..=7 {
        let s = haar_experiment(n, 10_000, 40 + n as u64, &table()).unwrap();
        let z = (s.mean_emp - s.mean_closed).abs() / s.standard_error();
        let ratio = s.var_emp / s.var_closed;
        assert!(z <= 5.0, "n={n}: z={z}");
        assert!((0.7..=1.4).contains(&ratio), "n={n}: ratio {ratio}");
        let cap = ce_upper_bound_ame(n);
        assert!(s.ce_values.iter().all(|&c| (-1e-12..=cap + 1e-12).contains(&c)), "n={n}");
    }
}

#[test]
fn million_samples_three_qubits() {
    let s = haar_experiment(3, 1_000_000, 7, &table()).unwrap();
    let (mean, var) = haar_moments(3);
    assert!((s.mean_emp - mean).abs() <= 5.0 * s.standard_error());
    assert!((s.var_emp / var - 1.0).abs() < 0.02, "{}", s.var_emp / var);
}

#[test]
fn sampling_is_deterministic() {
    let a = sample_haar_state(5, 11).unwrap();
    let b = sample_haar_state(5, 11).unwrap();
    assert_eq!(a, b);
    let r1 = haar_experiment(4, 500, 3, &table()).unwrap();
    let r2 = haar_experiment(4, 500, 3, &table()).unwrap();
    assert_eq!(r1.ce_values, r2.ce_values);
}

#[test]
fn too_few_samples_rejected() {
    assert!(matches!(haar_experiment(3, 99, 0, &table()), Err(HaarError::TooFewSamples(99))));
}

#[test]
fn histogram_counts_everything() {
    let s = haar_experiment(4, 2000, 1, &table()).unwrap();
    let h: Histogram = s.histogram(20);
    assert_eq!(h.counts.iter().sum::<usize>(), 2000);
    let csv = h.to_csv();
    assert!(csv.starts_with("bin,count\n"));
    assert_eq!(csv.lines().count(), 21);
}
