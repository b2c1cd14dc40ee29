use std::process::{Command, Output};

use serde_json::Value;

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy")).args(args).output().expect("spawn hardy")
}

fn hardy_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy")).env("HARDY_THREADS", threads).args(args).output().expect("spawn hardy")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

/// Data rows of a CSV artifact, header excluded.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn field(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

#[test]
fn greens_check_passes_and_is_deterministic() {
    let a = hardy(&["greens-check", "--n", "10000", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    let v = json(&a);
    assert!(v["result"]["max_relative_deviation"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["config"]["seed"], 7);
    let b = hardy(&["greens-check", "--n", "10000", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn greens_check_rejects_zero_pairs() {
    assert_eq!(hardy(&["greens-check", "--n", "0"]).status.code(), Some(64));
}

#[test]
fn distance_rows() {
    let o = hardy(&["distance", "--map", "halfplane", "--alpha", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("map,alpha,r_min,d,exp_neg_d\n"));
    let r = &rows(&text)[0];
    assert_eq!(r[0], "halfplane");
    assert_eq!(field(&r[1]), 3.0);
    assert!((field(&r[2]) - 0.5).abs() < 1e-8);
    assert!((field(&r[3]) - 1.0986123).abs() < 1e-7);
    assert!((field(&r[4]) - 0.3333333).abs() < 1e-7);

    let o = hardy(&["distance", "--map", "sector:2", "--alpha", "100"]);
    let r = &rows(&stdout(&o))[0];
    assert!((field(&r[4]) - 0.1).abs() <= 1e-6);
}

#[test]
fn distance_usage_errors() {
    assert_eq!(hardy(&["distance", "--map", "halfplane", "--alpha", "0"]).status.code(), Some(64));
    assert_eq!(hardy(&["distance", "--map", "halfplane", "--alpha", "-2"]).status.code(), Some(64));
    assert_eq!(hardy(&["distance", "--map", "sector:3", "--alpha", "2"]).status.code(), Some(64));
    assert_eq!(hardy(&["distance", "--map", "halfplane"]).status.code(), Some(64));
}

#[test]
fn distance_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let o = hardy(&["distance", "--map", "koebe", "--alpha", "10", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["map"], "koebe");
    assert_eq!(v["config"]["out"], path.to_str().unwrap());
    assert!(v["version"].as_str().unwrap().starts_with("hardy "));
}

#[test]
fn hardy_number_examples() {
    let v = json(&hardy(&["hardy-number", "--map", "koebe"]));
    let e = v["result"]["estimate"].as_f64().unwrap();
    assert!((0.45..=0.55).contains(&e), "{e}");
    assert_eq!(v["result"]["known"], 0.5);
    for key in ["map", "estimate", "fit_residual", "grid", "known"] {
        assert!(v["result"].get(key).is_some(), "{key}");
    }

    let v = json(&hardy(&["hardy-number", "--map", "strip"]));
    assert_eq!(v["result"]["estimate"], "infinity");
    assert_eq!(v["result"]["known"], "infinity");

    let v = json(&hardy(&["hardy-number", "--map", "sector:0.5"]));
    let e = v["result"]["estimate"].as_f64().unwrap();
    assert!((1.9..=2.1).contains(&e), "{e}");
    assert_eq!(v["result"]["known"], 2.0);
}

#[test]
fn verify_examples() {
    let o = hardy(&["verify", "--map", "halfplane", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["result"]["conclusion"], "member");
    let names: Vec<&str> = v["result"]["evidence"].as_array().unwrap().iter().map(|e| e["criterion"].as_str().unwrap()).collect();
    assert_eq!(names, ["hyp", "yamashita", "direct", "harm"]);

    let o = hardy(&["verify", "--map", "halfplane", "--p", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["conclusion"], "non_member");

    let o = hardy(&["verify", "--map", "halfplane", "--p", "1.0", "--no-harm"]);
    let c = json(&o)["result"]["conclusion"].clone();
    match o.status.code() {
        Some(2) => assert_eq!(c, "inconclusive"),
        Some(0) => assert_ne!(c, "inconclusive"),
        other => panic!("exit {other:?}"),
    }
}

#[test]
fn criteria_table() {
    let args = [
        "criteria", "--map", "halfplane", "--p", "0.5", "--walkers", "100000", "--alpha-min", "1", "--alpha-max", "1e3",
        "--per-decade", "4",
    ];
    let o = hardy(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = "alpha,exp_neg_d,omega,omega_stderr,integrand_hyp,integrand_harm";
    assert_eq!(text.lines().next(), Some(header));
    assert_eq!(text.matches(header).count(), 1);
    assert!(!text.contains('\r'));
    let rows = rows(&text);
    assert_eq!(rows.len(), 13);
    for r in &rows {
        let (alpha, e, omega, se) = (field(&r[0]), field(&r[1]), field(&r[2]), field(&r[3]));
        if alpha >= 1.0 {
            assert!((e * alpha - 1.0).abs() <= 1e-6, "{r:?}");
        }
        assert!(omega >= std::f64::consts::FRAC_2_PI * e - 3.0 * se, "{r:?}");
        assert!((field(&r[4]) - alpha.powf(-0.5) * e).abs() <= 1e-8 * field(&r[4]).max(1e-300));
    }
    assert!(text.contains("# conclusion: member\n"));
    assert!(text.contains("# config: {\"command\":\"criteria\""));
}

#[test]
fn criteria_subset_leaves_columns_empty() {
    let o = hardy(&["criteria", "--map", "koebe", "--p", "0.3", "--criteria", "hyp"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&stdout(&o));
    assert_eq!(rows.len(), 129);
    assert!(rows.iter().all(|r| r[2].is_empty() && r[3].is_empty() && r[5].is_empty() && !r[4].is_empty()));
    assert_eq!(hardy(&["criteria", "--map", "koebe", "--p", "0.3", "--criteria", "nope"]).status.code(), Some(64));
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let args = [
        "criteria", "--map", "koebe", "--p", "0.3", "--walkers", "5000", "--alpha-min", "1", "--alpha-max", "1e3",
        "--per-decade", "4",
    ];
    let one = hardy_threads("1", &args);
    let four = hardy_threads("4", &args);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(hardy_threads("many", &args).status.code(), Some(64));
}

#[test]
fn catalog_lists_every_family() {
    let text = stdout(&hardy(&["catalog"]));
    for key in ["halfplane", "sector", "strip", "koebe"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{key},"))), "{key}");
    }
    let v = json(&hardy(&["catalog", "--format", "json"]));
    assert_eq!(v["result"].as_array().unwrap().len(), 4);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(hardy(&["--help"]).status.code(), Some(0));
    assert_eq!(hardy(&["--version"]).status.code(), Some(0));
    assert_eq!(hardy(&[]).status.code(), Some(64));
}
