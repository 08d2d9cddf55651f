use std::process::{Command, Output};

use serde_json::Value;

fn qss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn same_config_gives_identical_bytes() {
    let args = ["--mode", "attack", "--rounds", "12", "--trials", "200", "--seed", "5"];
    let a = qss(&args);
    let b = qss(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = qss(&["--mode", "attack", "--rounds", "12", "--trials", "200", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn honest_mode_is_never_detected() {
    let out = qss(&["--mode", "honest", "--rounds", "30", "--trials", "300", "--compare-fraction", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["detection_rate"], 0.0);
    assert_eq!(v["mode"], "honest");
}

#[test]
fn attack_report_fields() {
    let out = qss(&["--mode", "attack", "--trials", "500", "--compare-fraction", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["q2_resolution_rate"], 1.0);
    assert_eq!(v["failure_event_rate"], 0.0);
    assert_eq!(v["round2_check_pass_rate"], 1.0);
    let hist = v["recovery_error_histogram"].as_object().unwrap();
    assert!(hist.keys().all(|k| k == "0" || k == "1"), "{hist:?}");
    let total: u64 = hist.values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 500);
}

#[test]
fn verify_equations_all_pass() {
    let out = qss(&["--mode", "verify-equations"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_pass"], true);
    assert!(v["rows"].as_array().unwrap().len() > 40);
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(qss(&["--compare-fraction", "0"]).status.code(), Some(2));
    assert_eq!(qss(&["--trials", "0"]).status.code(), Some(2));
    assert_eq!(qss(&["--mode", "attack", "--rounds", "1"]).status.code(), Some(2));
    assert_eq!(qss(&["--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let out = qss(&["--trials", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let args = ["--rounds", "8", "--trials", "20", "--format", "csv"];
    let stdout = qss(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(qss(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn help_exits_0() {
    let out = qss(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("--compare-fraction"));
}
