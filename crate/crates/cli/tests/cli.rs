//! End-to-end subcommand tests against the built binary: exit codes, output
//! shapes, and the parameter-file path.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtd-noise"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn tables_suppression_values() {
    let out = run(&["tables", "suppression", "--sig-figs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for needle in ["1.2e-19", "1.2e-31", "1.2e-37", "1.2e-43", "2.1e-72"] {
        assert!(text.contains(needle), "missing {needle} in:\n{text}");
    }
}

#[test]
fn tables_unknown_name_is_usage_error() {
    let out = run(&["tables", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown table"));
}

#[test]
fn unknown_flag_rejected() {
    let out = run(&["tables", "suppression", "--mystery"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_passes_with_exit_zero() {
    let out = run(&["verify", "all", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["suites"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    let out = run(&["verify", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dephase_zero_grid_row() {
    let out = run(&["dephase", "--t-grid", "0", "--gamma", "0", "--omega0", "1", "--aj", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "T,D_exact,D_broadened,regime");
    assert_eq!(data[1], "0e0,0e0,0e0,quasi_static");
}

#[test]
fn dephase_bad_grid_is_usage_error() {
    let out = run(&["dephase", "--t-grid", "x,y"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_empty_range_is_usage_error() {
    let out = run(&["scan", "--param", "gamma", "--range", "1:2:0", "--observable", "S0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_lambda_natural_rows() {
    let out = run(&["scan", "--param", "c_match", "--range", "1e-12,1", "--observable", "lambda_natural"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("c_match,lambda_natural"));
    assert!(text.contains("2.18e-30"));
    assert!(text.contains("2.18e-18"));
}

#[test]
fn spectrum_dump_and_params_file() {
    let dir = std::env::temp_dir().join(format!("gtd-noise-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("params.json");
    std::fs::write(&path, r#"{"m_R": 1.0, "omega0": 2.0, "alpha_gtd": 1.0, "sigma_branch": -1}"#)
        .unwrap();

    let out = run(&["spectrum", "--model", "wightman", "--params-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // sigma = -1 puts the single line at +2 omega0 = +4
    assert_eq!(doc["spectrum"]["delta_lines"][0]["center"], 4.0);

    // unknown key in the params file is a usage error
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"m_R": 1.0, "omega0": 2.0, "alpha_gtd": 1.0, "zzz": 0}"#).unwrap();
    let out = run(&["spectrum", "--params-file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_file_flag() {
    let dir = std::env::temp_dir().join(format!("gtd-noise-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = run(&["tables", "thresholds", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("C_match,lambda,N_star,mass_kg"));
    std::fs::remove_dir_all(&dir).ok();
}
