use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multicrit"))
        .args(args)
        .env_remove("MULTICRIT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn canonical(text: &str) -> String {
    let v: Value = serde_json::from_str(text).unwrap();
    let mut s = serde_json::to_string_pretty(&v).unwrap();
    s.push('\n');
    s
}

#[test]
fn hopf_interval_json() {
    let o = run(&["interval", "--example", "hopf", "--t", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["example_id"], "hopf");
    assert_eq!(v["params"]["t"], 8.0);
    let iv = &v["interval"];
    assert!((iv["lo"].as_f64().unwrap() - 0.1875).abs() <= 1e-15);
    assert_eq!(iv["hi"].as_f64(), Some(0.75));
    assert_eq!(iv["hi_strict"], true);
    assert_eq!(iv["lo_strict"], false);
    assert!(v["conditions"].as_array().unwrap().len() >= 3);
    assert_eq!(v["bounds"]["b0g2"]["lo"], 0.75);
    assert_eq!(canonical(&text), text);
}

#[test]
fn json_outputs_round_trip() {
    for args in [
        vec!["interval", "--example", "circle-sphere-sphere"],
        vec!["interval", "--example", "cylinder-orbit", "--t", "1.5", "--unchecked"],
        vec!["solve", "--length", "4", "--alpha", "2", "--p", "3", "--grid", "64", "--f", "bump"],
        vec!["expansion", "--count", "6"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let text = stdout(&o);
        assert_eq!(canonical(&text), text, "{args:?}");
    }
}

#[test]
fn out_of_window_interval_is_empty_when_unchecked() {
    let o = run(&["interval", "--example", "cylinder-orbit", "--t", "1.5", "--unchecked"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["interval"]["empty"], true);
}

#[test]
fn malformed_flags_exit_one_with_usage() {
    for args in [
        vec!["interval"],
        vec!["interval", "--example", "nowhere"],
        vec!["interval", "--example", "hopf", "--t", "abc"],
        vec!["solve", "--length", "1"],
        vec!["frobnicate"],
        vec!["table"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains("Usage"), "{args:?}: {err}");
    }
}

#[test]
fn hypothesis_and_precondition_errors_exit_two() {
    for args in [
        vec!["interval", "--example", "hopf", "--t", "0.5"],
        vec!["interval", "--example", "hopf", "--n", "5"],
        vec!["interval", "--example", "circle-sphere-sphere", "--b", "0.4"],
        vec!["solve", "--length", "1", "--alpha", "1", "--p", "5", "--grid", "32"],
        vec!["solve", "--length=-1", "--alpha", "1", "--p", "5"],
        vec!["solve", "--length", "1", "--alpha", "1", "--p", "5", "--tol", "0"],
        vec!["expansion", "--n", "2"],
        vec!["expansion", "--n", "3"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn non_convergence_exits_three_with_best_report() {
    let o = run(&["solve", "--length", "6.2832", "--alpha", "1", "--p", "5", "--grid", "64", "--f", "bump", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["converged"], false);
}

#[test]
fn solve_reports_nonconstant_profile() {
    let dir = std::env::temp_dir().join(format!("multicrit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("u.csv");
    let o = run(&[
        "solve", "--length", "6.2832", "--alpha", "1", "--p", "5", "--grid", "256", "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classification"], "Nonconstant");
    assert!(v["el_residual"].as_f64().unwrap() < 1e-10);
    let mut r = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["s", "u"]);
    assert_eq!(r.records().count(), 256);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_from_environment_does_not_change_output() {
    let args = ["solve", "--length", "6.2832", "--alpha", "1", "--p", "5", "--grid", "128"];
    let one = run(&args);
    let four = Command::new(env!("CARGO_BIN_EXE_multicrit"))
        .args(args)
        .env("MULTICRIT_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn table_lists_all_configurations() {
    let o = run(&["table", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("# default parameters:"));
    assert!(first.contains("hopf (t=8.0)"));
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(&header[..3], ["example", "n", "t"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    let names: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(
        names,
        ["sphere-free", "cylinder-rotations", "circle-sphere-sphere", "cylinder-triple", "hopf", "cylinder-orbit"]
    );
    let hopf = &rows[4];
    let (lo, hi): (f64, f64) = (hopf[7].parse().unwrap(), hopf[8].parse().unwrap());
    assert!((lo - 0.1875).abs() <= 1e-15 && hi == 0.75);
    assert!(rows.iter().all(|r| &r[11] == "false"));
}

#[test]
fn expansion_summary_and_samples() {
    let o = run(&["expansion", "--n", "6", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["limit_fitted", "c1_fitted", "c1_predicted", "window"] {
        assert!(!v[key].is_null(), "{key}");
    }
    assert!((v["c1_predicted"].as_f64().unwrap() - 5.0 / 12.0).abs() < 1e-15);
    let o = run(&["expansion", "--format", "csv", "--count", "5"]);
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap(), vec!["epsilon", "quotient"]);
    assert_eq!(r.records().count(), 5);
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["solve", "--help"]).status.code(), Some(0));
}
