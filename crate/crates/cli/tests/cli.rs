use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specshare"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn thresholds_at_four() {
    let v = json(&["thresholds", "--alpha", "4"]);
    assert!((f(&v, "lambda_star") - 0.504976212228).abs() < 1e-11);
    assert!((f(&v, "lambda_prime") - 0.770486229740).abs() < 1e-11);
    assert!(v["lambda_double_prime"].is_null());
    assert!(v["sqrt_lambda_star_half_alpha"].is_null());
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "alpha",
            "lambda_star",
            "beta_star_unconstrained",
            "lambda_prime",
            "lambda_double_prime",
            "sqrt_lambda_star_half_alpha"
        ]
    );
}

#[test]
fn thresholds_above_four_are_finite() {
    let v = json(&["thresholds", "--alpha", "5"]);
    assert!((f(&v, "lambda_double_prime") - 1.836963563239).abs() < 1e-11);
    assert!(f(&v, "sqrt_lambda_star_half_alpha") > 0.0);
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["thresholds", "--alpha", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["equilibrium", "--alpha", "3", "--n1", "-1", "--n2", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "regime-map",
            "--alpha",
            "3",
            "--n-max",
            "4",
            "--grid-steps",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["thresholds"]).status.code(), Some(2));
}

#[test]
fn equilibrium_regimes_in_caller_order() {
    let v = json(&[
        "equilibrium",
        "--alpha",
        "4.5",
        "--n1",
        "14.14",
        "--n2",
        "7.07",
        "--model",
        "fixed",
    ]);
    assert_eq!(v["regime"], "partial/partial");
    assert_eq!(v["canonical_swap"], true);

    let v = json(&[
        "equilibrium",
        "--alpha",
        "3",
        "--n1",
        "5",
        "--n2",
        "30",
        "--model",
        "fixed",
    ]);
    assert_eq!(v["regime"], "full/partial");
    assert_eq!(f(&v, "lambda1"), 5.0);
    assert!((f(&v, "lambda2") / 10.0 - 1.0).abs() < 0.2);

    let v = json(&["equilibrium", "--alpha", "3", "--n1", "30", "--n2", "5"]);
    assert_eq!(v["regime"], "partial/full");
    assert_eq!(f(&v, "lambda2"), 5.0);

    let v = json(&["equilibrium", "--alpha", "3", "--n1", "5", "--n2", "6"]);
    assert_eq!(v["regime"], "full/full");
    assert_eq!((f(&v, "lambda1"), f(&v, "lambda2")), (5.0, 6.0));
}

#[test]
fn verify_reports_no_profitable_deviation() {
    for model in ["fixed", "variable"] {
        let v = json(&[
            "equilibrium",
            "--alpha",
            "3.7",
            "--n1",
            "0.8",
            "--n2",
            "12",
            "--model",
            model,
            "--verify",
        ]);
        assert!(f(&v, "max_deviation_gain") <= 1e-6);
        assert!(f(&v, "price_of_anarchy") >= 1.0);
    }
    let v = json(&["equilibrium", "--alpha", "3.7", "--n1", "0.8", "--n2", "12"]);
    assert!(v["max_deviation_gain"].is_null());
}

#[test]
fn twelve_significant_digits() {
    let out = run(&["thresholds", "--alpha", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let digits = row[1]
        .chars()
        .filter(char::is_ascii_digit)
        .collect::<String>();
    assert!(digits.trim_start_matches('0').len() <= 12, "{}", row[1]);
    assert_eq!(row[1], "0.800207539905");
}

#[test]
fn regime_map_is_mirror_symmetric() {
    let out = run(&[
        "regime-map",
        "--alpha",
        "5",
        "--n-max",
        "6",
        "--grid-steps",
        "6",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n1,n2,regime"));
    let cells: Vec<(String, String, String)> = lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].into(), c[1].into(), c[2].into())
        })
        .collect();
    assert_eq!(cells.len(), 36);
    let mirror = |r: &str| match r {
        "full/partial" => "partial/full".to_string(),
        "partial/full" => "full/partial".to_string(),
        other => other.to_string(),
    };
    for (n1, n2, r) in &cells {
        let (_, _, swapped) = cells.iter().find(|(a, b, _)| a == n2 && b == n1).unwrap();
        assert_eq!(&mirror(r), swapped);
    }
    for r in [
        "full/full",
        "full/partial",
        "partial/full",
        "partial/partial",
    ] {
        assert!(cells.iter().any(|c| c.2 == r), "{r} missing");
    }
}

#[test]
fn regime_map_near_two_is_full_reuse() {
    let out = run(&[
        "regime-map",
        "--alpha",
        "2.1",
        "--n-max",
        "10",
        "--grid-steps",
        "5",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r["regime"] == "full/full"));
}

#[test]
fn poa_curve_rows() {
    let out = run(&[
        "poa-curve",
        "--alpha",
        "5",
        "--n-min",
        "10",
        "--n-max",
        "1000",
        "--points",
        "3",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let first = f(&rows[0], "price_of_anarchy");
    assert!(rows
        .iter()
        .all(|r| (f(r, "price_of_anarchy") - first).abs() < 1e-9));
}

#[test]
fn simulate_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let topo = dir.path().join("topology.csv");
    let args = |path: &std::path::Path| {
        vec![
            "simulate".to_string(),
            "--protocol".into(),
            "ra".into(),
            "--alpha".into(),
            "3.5".into(),
            "--n1-count".into(),
            "40".into(),
            "--n2-count".into(),
            "20".into(),
            "--iters".into(),
            "12".into(),
            "--slots".into(),
            "10".into(),
            "--seed".into(),
            "5".into(),
            "--format".into(),
            "csv".into(),
            "--out".into(),
            path.display().to_string(),
        ]
    };
    let mut first = args(&trace);
    first.extend(["--topology-out".to_string(), topo.display().to_string()]);
    let out = run(&first.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["protocol"], "ra");
    assert_eq!(summary["iterations"], 12);
    let p1 = f(&summary, "strategy1");
    assert!((0.0..=1.0).contains(&p1));

    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("iter,strategy1,strategy2,r1,r2,f1,f2\n"));
    assert_eq!(text.lines().count(), 13);
    let topo_text = std::fs::read_to_string(&topo).unwrap();
    assert_eq!(topo_text.lines().count(), 61);

    let again = dir.path().join("again.csv");
    let out = run(&args(&again).iter().map(String::as_str).collect::<Vec<_>>());
    assert!(out.status.success());
    assert_eq!(
        std::fs::read(&trace).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn simulate_rejects_bad_parameters() {
    let out = run(&[
        "simulate",
        "--protocol",
        "csma",
        "--alpha",
        "3",
        "--iters",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "simulate",
        "--protocol",
        "ra",
        "--alpha",
        "3",
        "--margin",
        "0.6",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_accepts_negative_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = run(&[
        "simulate",
        "--protocol",
        "csma",
        "--alpha",
        "4",
        "--n1-count",
        "30",
        "--n2-count",
        "20",
        "--iters",
        "3",
        "--slots",
        "4",
        "--format",
        "csv",
        "--init1",
        "-30",
        "--init2",
        "-12.5",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&trace).unwrap();
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let g1: f64 = first[1].parse().unwrap();
    assert!((-31.0..=-29.0).contains(&g1), "{g1}");
}
