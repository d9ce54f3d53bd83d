use std::process::Command;

use nblab::cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_PRECISION, EXIT_USAGE};
use serde_json::Value;

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("nblab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_result(args: &[&str]) -> Value {
    let (code, out, err) = run_args(args);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["config"].is_object());
    v["result"].clone()
}

#[test]
fn zeros_example() {
    let r = json_result(&["zeros", "--t-max", "30", "--tol", "1e-6"]);
    let t: Vec<f64> = r["ordinates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(t.len(), 3);
    assert!((t[0] - 14.134725).abs() < 1e-6);
}

#[test]
fn constants_example() {
    let r = json_result(&["constants", "--target", "1e-12"]);
    assert!((r["gamma"].as_f64().unwrap() - 0.577215664901533).abs() < 1e-12);
    assert!((r["lambda"].as_f64().unwrap() - 0.422784335098467).abs() < 1e-12);
}

#[test]
fn sweep_csv_is_nonincreasing() {
    let (code, out, _) = run_args(&["--format", "csv", "sweep", "--family", "integers", "--n", "2,5,10,20"]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "N,distance,theta_log_sum,gap,gram_condition");
    let d: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(d.len(), 4);
    assert!(d.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn moment_json_round_trips_through_function_file() {
    let first = json_result(&["moment", "--random", "5", "--seed", "42"]);
    let dir = std::env::temp_dir().join(format!("nblab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("phi.json");
    std::fs::write(&path, first["function"].to_string()).unwrap();
    let second = json_result(&["moment", "--function-file", path.to_str().unwrap()]);
    assert_eq!(first["moment"]["closed_form"], second["moment"]["closed_form"]);
    assert_eq!(first["function"], second["function"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identical_argv_gives_identical_bytes() {
    for args in [
        &["moment", "--random", "4", "--seed", "9"][..],
        &["--format", "csv", "approx", "--n", "8"][..],
        &["gram", "--l", "1,1.5,2"][..],
    ] {
        assert_eq!(run_args(args).1, run_args(args).1);
    }
}

#[test]
fn every_subcommand_runs() {
    for args in [
        &["zeta", "--re", "0.5", "--im", "14"][..],
        &["xi", "--re", "0.5"][..],
        &["fe-check", "--re", "0.3", "--im", "7"][..],
        &["lemma1", "--l", "1,2.5"][..],
        &["norm", "--terms", "-1:1,2:2", "--target", "1e-6"][..],
        &["norm", "--constant", "2", "--p", "1.5"][..],
        &["sweep", "--family", "geometric", "--ratio", "2", "--n", "2,4"][..],
        &["sweep", "--family", "list", "--values", "1,2,3,5", "--n", "2,4"][..],
    ] {
        for format in ["json", "csv"] {
            let mut full = vec!["--format", format];
            full.extend_from_slice(args);
            let (code, out, err) = run_args(&full);
            assert_eq!(code, EXIT_OK, "{full:?}: {err}");
            assert!(!out.is_empty());
        }
    }
}

#[test]
fn error_exit_codes() {
    assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run_args(&["zeta", "--re", "0.5", "--bogus"]).0, EXIT_USAGE);
    assert_eq!(run_args(&["sweep", "--family", "geometric", "--n", "2"]).0, EXIT_USAGE);
    assert_eq!(run_args(&["zeta", "--re", "1"]).0, EXIT_DOMAIN);
    assert_eq!(run_args(&["moment", "--terms", "1:1,1:2"]).0, EXIT_DOMAIN);
    assert_eq!(run_args(&["gram", "--l", "1,2,2"]).0, EXIT_DOMAIN);
    assert_eq!(run_args(&["constants", "--target", "1e-20"]).0, EXIT_PRECISION);
    assert_eq!(
        run_args(&["approx", "--n", "20", "--target", "1e-14"]).0,
        EXIT_PRECISION
    );
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_nblab");
    let ok = Command::new(bin).args(["lemma1", "--l", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin).args(["nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    let pole = Command::new(bin).args(["zeta", "--re", "1"]).output().unwrap();
    assert_eq!(pole.status.code(), Some(EXIT_DOMAIN));
}
