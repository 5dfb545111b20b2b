//! End-to-end tests of the command-line interface: exit codes, CSV shape,
//! and the normalized-model round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_zaq")
}

fn model(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("zaq-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_z3z3_reports_solution() {
    let out = run(&["analyze", model("z3z3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("plain: yes"));
    assert!(text.contains("rho = 0.4000000000"), "{text}");
    assert!(text.contains("ergodic"));
    assert!(text.contains("unique"));
}

#[test]
fn analyze_zqueue_lists_both_regimes() {
    let out = run(&["analyze", model("zqueue.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("the monoid is Z"), "{text}");
    assert!(text.contains("0.4285714285"), "{text}");
    assert!(text.contains("0.2500000000"), "{text}");
}

#[test]
fn analyze_csv_has_fixed_columns() {
    let csv = tmp("analyze.csv");
    let out = run(&[
        "analyze",
        model("bicyclic_p075.json").to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "solution,rho,departure_rate,residual,r_a,r_b,q_a,q_b"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    // Largest load first, 17 significant digits.
    let rho0: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    let rho1: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((rho0 - 0.6).abs() < 1e-9, "{rho0}");
    assert!((rho1 - 1.0 / 7.0).abs() < 1e-9, "{rho1}");
    assert!(rows[0].split(',').nth(1).unwrap().len() >= 17);
}

#[test]
fn exit_codes_for_bad_input() {
    let out = run(&["analyze", "/nonexistent/model.json"]);
    assert_eq!(out.status.code(), Some(1));
    let bad = tmp("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    // Valid JSON, invalid distribution.
    let invalid = tmp("invalid.json");
    std::fs::write(
        &invalid,
        r#"{"factors": [{"kind": "free_monoid", "letters": ["a"]}],
           "nu": {"a": 0.5}, "lambda": 1.0, "mu": 1.0}"#,
    )
    .unwrap();
    let out = run(&["analyze", invalid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stationary_rejects_transient_models() {
    let transient = tmp("transient.json");
    std::fs::write(
        &transient,
        r#"{"factors": [{"kind": "free_monoid", "letters": ["a"]}],
           "nu": {"a": 1.0}, "lambda": 3.0, "mu": 1.0}"#,
    )
    .unwrap();
    let out = run(&["stationary", transient.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn stationary_csv_accumulates_mass() {
    let csv = tmp("stationary.csv");
    let out = run(&[
        "stationary",
        model("z3z3.json").to_str().unwrap(),
        "--max-len",
        "5",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "word,length,probability,cumulative");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1 + 4 + 8 + 16 + 32 + 64);
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(first[0], "ε");
    assert!((first[2].parse::<f64>().unwrap() - 0.6).abs() < 1e-12);
    let last: Vec<&str> = rows.last().unwrap().split(',').collect();
    let cumulative: f64 = last[3].parse().unwrap();
    assert!((cumulative - (1.0 - 0.4f64.powi(6))).abs() < 1e-9);
}

#[test]
fn simulate_is_deterministic_and_writes_csv() {
    let csv1 = tmp("sim1.csv");
    let csv2 = tmp("sim2.csv");
    for csv in [&csv1, &csv2] {
        let out = run(&[
            "simulate",
            model("mm1.json").to_str().unwrap(),
            "--events",
            "50000",
            "--seed",
            "7",
            "--reps",
            "2",
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    let a = std::fs::read(&csv1).unwrap();
    let b = std::fs::read(&csv2).unwrap();
    assert_eq!(a, b, "same seed must give identical CSV output");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(
        "rep,seed,stream,events,elapsed,empty_fraction,departure_rate,interdeparture_cv,tv_vs_analytic"
    ));
    assert_eq!(text.lines().count(), 3);
    // Companion histogram and departure-statistics files.
    let hist = std::fs::read_to_string(tmp("sim1_histogram.csv")).unwrap();
    assert!(hist.starts_with("word,length,empirical_fraction,analytic_pi,abs_diff"));
    assert!(hist.lines().count() > 5);
    let hist2 = std::fs::read_to_string(tmp("sim2_histogram.csv")).unwrap();
    assert_eq!(hist, hist2, "histogram emission must be deterministic");
    let deps = std::fs::read_to_string(tmp("sim1_departures.csv")).unwrap();
    assert!(deps.starts_with("rep,departures,rate,cv,dispersion"));
    assert_eq!(deps.lines().count(), 3);
}

#[test]
fn qbd_reports_certificate() {
    let out = run(&["qbd", model("z3z3.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("spectral radius"));
    assert!(text.contains("certified"));
    // Non-plain pairs cannot be lumped.
    let out = run(&["qbd", model("bicyclic.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn validate_reports_tv() {
    let csv = tmp("validate.csv");
    let out = run(&[
        "validate",
        model("z3z3.json").to_str().unwrap(),
        "--max-len",
        "6",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("total variation"));
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("word,length,oracle_pi,analytic_pi,abs_diff"));
    // Header plus all 253 words of length <= 6 (levels 1..6 hold 4*2^(k-1)).
    assert_eq!(csv_text.lines().count(), 1 + 1 + 4 + 8 + 16 + 32 + 64 + 128);
}

#[test]
fn dump_normalized_round_trips() {
    let out = run(&[
        "analyze",
        model("z3z3.json").to_str().unwrap(),
        "--dump-normalized",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dumped = stdout(&out);
    let reparsed = zaq::model::ModelFile::from_json(&dumped).unwrap();
    let renormalized = reparsed.normalized().unwrap();
    assert_eq!(reparsed, renormalized, "normalized dump must be a fixed point");
    // The rationals were resolved.
    assert!(dumped.contains("0.25"));
    assert!(!dumped.contains("1/4"));
    // And it still builds to the same pair.
    let built = reparsed.build().unwrap();
    assert_eq!(built.pair.len(), 4);
}

#[test]
fn simulate_honors_thread_env() {
    let out = Command::new(bin())
        .args([
            "simulate",
            model("mm1.json").to_str().unwrap(),
            "--events",
            "20000",
            "--reps",
            "3",
        ])
        .env("ZAQ_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2 worker(s)"));
}
