use std::process::{Command, Output};

use serde_json::Value;

fn supermac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supermac"))
        .args(args)
        .env_remove("SUPERMAC_OUT_DIR")
        .env_remove("SUPERMAC_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn norm_of_sp1_at_defaults() {
    let out = supermac(&["compute", "norm", "--lambda", "1", "--n", "1", "--m", "1", "--quadrature"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert!((doc["result"]["formula"].as_f64().unwrap() - 0.68).abs() < 1e-12);
    assert!((doc["result"]["quad_re"].as_f64().unwrap() - 0.68).abs() < 1e-10);
    assert_eq!(doc["config"]["params"]["qsqrt"], "7/10");
}

#[test]
fn macdonald_two_variables() {
    let out = supermac(&["compute", "macdonald", "--lambda", "2", "--n", "2"]);
    assert!(out.status.success());
    let terms = json(&out)["result"]["terms"].as_array().unwrap().clone();
    assert_eq!(terms.len(), 2);
    // P_(2) = m_2 + (1+q)(1-t)/(1-qt) m_11 with q = 49/100, t = 1/4
    assert_eq!(terms[0]["partition"], "1,1");
    assert_eq!(terms[0]["numerator"], "149");
    assert_eq!(terms[0]["denominator"], "117");
}

#[test]
fn super_outside_fat_hook_is_zero_with_warning() {
    let out = supermac(&["compute", "super", "--lambda", "3,3", "--n", "1", "--m", "2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(json(&out)["result"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn super_csv_lists_terms() {
    let out = supermac(&["compute", "super", "--lambda", "2,1", "--n", "2", "--m", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,coefficient"));
    assert!(text.contains("\"2,1\",,1"));
}

#[test]
fn eigen_rejects_lambda_outside_fat_hook() {
    let out = supermac(&["verify", "eigen", "--lambda", "9,9,9", "--n", "1", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eigen_single_lambda_passes() {
    let out = supermac(&["verify", "eigen", "--lambda", "2,1", "--n", "2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["config"]["seed"], 20240611);
    assert_eq!(doc["config"]["lambda"], "2,1");
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(supermac(&["verify", "norms", "--n", "1", "--m", "1", "--xi", "1", "--xip", "1"]).status.code(), Some(2));
    assert_eq!(supermac(&["--q", "1.5", "--t", "0.2", "compute", "macdonald", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(supermac(&["compute", "macdonald", "--lambda", "x"]).status.code(), Some(2));
    assert_eq!(supermac(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn coarse_grid_fails_with_counterexample() {
    let out = supermac(&["verify", "norms", "--n", "1", "--m", "1", "--max-weight", "3", "--grid", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn excluded_probe_is_diagnostic() {
    let out = supermac(&["verify", "radii", "--probe-excluded", "--n", "1", "--m", "1", "--max-weight", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let checks = json(&out)["reports"][0]["checks"].as_array().unwrap().clone();
    let probe = checks.iter().find(|c| c["kind"] == "diagnostic").expect("probe check");
    assert!(probe["value"].as_f64().unwrap() > 1e-3);
}

#[test]
fn norms_csv_columns() {
    let out = supermac(&["verify", "norms", "--n", "2", "--m", "1", "--max-weight", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,formula,quad_re,quad_im,rel_err,N,K,xi,xip,seed"));
    assert!(lines.all(|l| l.ends_with(",64,40,4.0,1.0,20240611")));
}

#[test]
fn all_suites_small() {
    let out = supermac(&["verify", "all", "--n", "1", "--m", "1", "--max-weight", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reports_are_reproducible_in_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_supermac"))
            .args(["verify", "factorization", "--seed", "5"])
            .env("SUPERMAC_OUT_DIR", dir.path())
            .env("SUPERMAC_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(dir.path().join("verify-factorization.json")).unwrap()
    };
    let first = run("1");
    let second = run("4");
    assert_eq!(first, second);
    let doc: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(doc["config"]["seed"], 5);
}
