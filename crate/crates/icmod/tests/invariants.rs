//! Cross-module invariants checked on every worked-example fixture.

mod common;

use common::*;
use icmod::analysis::{n_to_n_gap_report, receiver_dmin};
use icmod::constellation::{ungerboeck_partition, Kind};
use icmod::labeling::TieRule;
use icmod::sim::simulate_bpsk_baseline;

const FIXTURES: [(&str, &str); 9] = [
    ("example1.problem.json", "example1.L.json"),
    ("example2.problem.json", "example2.L.json"),
    ("example3.problem.json", "example3.L3.json"),
    ("example3.problem.json", "example3.L4.json"),
    ("example3.problem.json", "example3.L5.json"),
    ("example4.problem.json", "example4.L.json"),
    ("example5.problem.json", "example5.L2.json"),
    ("example5.problem.json", "example5.L3.json"),
    ("example5.problem.json", "example5.L4.json"),
];

/// Per-receiver distance sits between the partition level matched to its
/// exponent and the next level down (full-set minimum for eta = N - 1).
#[test]
fn guarantee_band_on_every_fixture() {
    for (pf, cf) in FIXTURES {
        let a = analyze(pf, cf, Kind::Psk, TieRule::InputOrder);
        let tree = ungerboeck_partition(&a.cons);
        let n = a.code.len();
        for v in &a.views {
            if v.eta >= n {
                continue;
            }
            let d2 = receiver_dmin(&a.labeling, &a.code, &v.knows, &a.cons);
            let hi = tree.delta[n - v.eta];
            let lo = tree.delta[n - v.eta - 1];
            assert!(
                d2 <= hi + 1e-9 && d2 >= lo - 1e-9,
                "{pf}/{cf} {}: {d2} outside [{lo}, {hi}]",
                v.id
            );
        }
    }
}

/// The reported minimum distance is the first entry of the receiver's
/// distance histogram on every fixture.
#[test]
fn dmin_equals_first_histogram_entry() {
    for (pf, cf) in FIXTURES {
        let a = analyze(pf, cf, Kind::Psk, TieRule::InputOrder);
        for p in &a.profiles {
            if p.d_min_squared.is_finite() {
                assert!(
                    (p.d_min_squared - p.distance_histogram[0].0).abs() < 1e-9,
                    "{pf}/{cf} {}",
                    p.id
                );
            }
        }
    }
}

/// Zero side-information gain exactly for receivers failing both
/// eligibility conditions.
#[test]
fn sicg_zero_iff_ineligible() {
    for (pf, cf) in FIXTURES {
        let a = analyze(pf, cf, Kind::Psk, TieRule::InputOrder);
        for (v, p) in a.views.iter().zip(&a.profiles) {
            if !v.sicg_eligible {
                assert!(p.sicg_db.abs() < 1e-9, "{pf}/{cf} {}", v.id);
            }
        }
    }
}

/// The two gain measures differ by the constant full-set/binary ratio.
#[test]
fn acg_and_sicg_differ_by_constant() {
    for (pf, cf) in FIXTURES {
        let a = analyze(pf, cf, Kind::Psk, TieRule::InputOrder);
        let offset = 10.0 * (a.cons.min_d2() / 4.0).log10();
        for p in &a.profiles {
            if p.d_min_squared.is_finite() {
                assert!(
                    (p.acg_db - p.sicg_db - offset).abs() < 1e-9,
                    "{pf}/{cf} {}",
                    p.id
                );
            }
        }
    }
}

/// The effective codebook exponent equals eta on every fixture (no
/// degenerate codes among the published ones).
#[test]
fn effective_rank_equals_eta_on_fixtures() {
    for (pf, cf) in FIXTURES {
        let a = analyze(pf, cf, Kind::Psk, TieRule::InputOrder);
        for v in &a.views {
            assert_eq!(v.effective_rank, v.eta, "{pf}/{cf} {}", v.id);
        }
    }
}

/// A receiver with no side information sees the full ring: its distance is
/// the closed-form full-set minimum, which shrinks as the code lengthens
/// while the best receiver's grows.
#[test]
fn no_side_info_receiver_follows_ring_formula() {
    for (file, len) in
        [("example3.L3.json", 3usize), ("example3.L4.json", 4), ("example3.L5.json", 5)]
    {
        let a = analyze("example3.problem.json", file, Kind::Psk, TieRule::InputOrder);
        let expect =
            4.0 * len as f64 * (std::f64::consts::PI / (1u64 << len) as f64).sin().powi(2);
        let worst = a.profiles.last().unwrap();
        assert!(worst.d_min_squared > 0.0);
        assert!((worst.d_min_squared - expect).abs() < 1e-9, "{file}");
    }
}

/// Gap report rows carry the published first-receiver distances for the
/// four-receiver length sweep, and a single code yields a one-row table.
#[test]
fn gap_report_shapes() {
    let problem = load_problem("example5.problem.json");
    let codes = vec![
        load_code("example5.L2.json"),
        load_code("example5.L3.json"),
        load_code("example5.L4.json"),
    ];
    let report = n_to_n_gap_report(&problem, &codes, Kind::Psk).unwrap();
    let r1: Vec<f64> = report.rows.iter().map(|r| r.d2[0].1).collect();
    assert!((r1[0] - 8.0).abs() < 0.01);
    assert!((r1[1] - 12.0).abs() < 0.01);
    assert!((r1[2] - 16.0).abs() < 0.01);
    // This sweep's worst receiver knows a message, so no monotonicity flag.
    assert!(!report.worst_has_no_side_info);

    let single = n_to_n_gap_report(&problem, &codes[..1].to_vec(), Kind::Psk).unwrap();
    assert_eq!(single.rows.len(), 1);
    let gap = single.rows[0].gap_db.unwrap();
    assert!((gap - 10.0 * (8.0f64 / 4.0).log10()).abs() < 1e-9);
}

/// Reference-scheme oracle: a receiver whose demand rides on a single
/// unknown coded bit has the antipodal binary error rate, with the noise
/// scaled for the wider bandwidth.
#[test]
fn baseline_single_bit_receiver_matches_analytic_rate() {
    let a = analyze("example1.problem.json", "example1.L.json", Kind::Psk, TieRule::InputOrder);
    let trials = 100_000u64;
    let snrs = [0.0, 2.0, 4.0];
    let res = simulate_bpsk_baseline(&a.problem, &a.code, &snrs, trials, 17, true).unwrap();
    for (i, &snr) in snrs.iter().enumerate() {
        let n0 = 10f64.powf(-snr / 10.0) * (a.code.len() as f64 / 2.0);
        let p = q_function((4.0 / (2.0 * n0)).sqrt());
        let got = res.curves[0].points[i].rate;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((got - p).abs() <= 3.0 * se, "snr {snr}: {got} vs {p}");
    }
}
