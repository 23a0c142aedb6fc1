//! End-to-end tests of the `fisher-eig` binary: command surface, exit
//! codes, format contracts and output determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fisher-eig"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn infer_reports_the_tabulated_eigenvalue() {
    let out = run(&["infer", "--k", "1", "--lambda", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1.353533"), "{text}");
    assert!(text.contains("1.296590"), "{text}");
}

#[test]
fn infer_harmonic_case_is_exact() {
    let out = run(&["infer", "--k", "1", "--lambda", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("E                  1.000000"), "{text}");
    assert!(text.contains("f                  1.000000"), "{text}");
}

#[test]
fn infer_paper_convention_halves_the_energy() {
    let out = run(&["infer", "--k", "1", "--lambda", "1", "--convention", "paper"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0.676767"), "{}", stdout(&out));
}

#[test]
fn usage_errors_exit_with_code_two() {
    for args in [
        vec!["infer", "--k", "1", "--lambda", "-1"],
        vec!["infer", "--k", "1", "--lambda", ""],
        vec!["infer", "--k", "1", "--lambda", "1,2"],
        vec!["infer", "--k", "1", "--lambda", "abc"],
        vec!["infer", "--k", "0", "--lambda", "0"],
        vec!["check", "--suite", "bogus"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn table_csv_contract() {
    let out = run(&["table", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda,E_num,E_inferred,cr_product"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);

    // numeric fields recover their printed 9-significant-digit values
    let first: Vec<f64> = rows[0].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 1e-4);
    assert!((first[2] - 1.000074).abs() < 1e-5);
    for row in &rows {
        for cell in row.split(',') {
            let value: f64 = cell.parse().unwrap();
            assert_eq!(format!("{value:.8e}"), cell, "cell {cell} not round-trip stable");
        }
    }
}

#[test]
fn table_output_is_deterministic() {
    let a = run(&["table", "--format", "csv"]);
    let b = run(&["table", "--format", "csv"]);
    assert_eq!(stdout(&a), stdout(&b));

    // text mode differs only in the timing line
    let strip = |s: String| -> String {
        s.lines()
            .filter(|l| !l.starts_with("elapsed_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = strip(stdout(&run(&["table"])));
    let b = strip(stdout(&run(&["table"])));
    assert_eq!(a, b);
}

#[test]
fn table_accepts_values_outside_the_reference_grid() {
    let out = run(&["table", "--lambda", "10000", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields[0], 1e4);
    assert!(fields[1] > fields[2], "E_num should exceed E_inferred");
}

#[test]
fn under_resolved_oracle_marks_row_and_exits_three() {
    let out = run(&[
        "table",
        "--lambda",
        "1000",
        "--basis-size",
        "16",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains("nan"), "row should be marked: {row}");
    // the inference columns still carry values
    let last = row.split(',').next_back().unwrap();
    assert!(last.parse::<f64>().unwrap().is_finite());
}

#[test]
fn oracle_command_matches_the_reference_eigenvalue() {
    let out = run(&["oracle", "--k", "1", "--lambda", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("1.392352"), "{text}");
    assert!(text.contains("momentum_variance"), "{text}");
}

#[test]
fn check_identities_passes() {
    let out = run(&["check", "--suite", "identities"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("[PASS] conjugacy"));
    assert!(text.contains("[PASS] reciprocity-finite-diff"));
    assert!(text.contains("[PASS] cramer-rao-bound"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn check_table_reports_max_deviation() {
    let out = run(&["check", "--suite", "table"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("max |deviation from reference|"), "{text}");
    assert!(text.contains("[PASS] table-inferred-energy"));
}

#[test]
fn json_round_trip_at_nine_significant_digits() {
    let out = run(&["table", "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    let e = rows[4]["e_inferred"].as_f64().unwrap();
    // printed value is the 9-significant-digit rounding of 1.3535331166...
    let expected: f64 = "1.35353312e0".parse().unwrap();
    assert_eq!(e, expected);
    // benchmark rows carry their published comparison targets
    assert_eq!(rows[4]["e_inferred_reference"].as_f64().unwrap(), 1.353533);
    assert_eq!(rows[4]["e_num_reference"].as_f64().unwrap(), 1.392351);

    // identical runs agree on everything except the timing field
    let mut a: serde_json::Value = serde_json::from_str(&stdout(&run(&["table", "--format", "json"]))).unwrap();
    let mut b: serde_json::Value = serde_json::from_str(&stdout(&run(&["table", "--format", "json"]))).unwrap();
    a["elapsed_ms"] = 0.into();
    b["elapsed_ms"] = 0.into();
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join("fisher-eig-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let out = run(&["table", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let written = std::fs::read_to_string(Path::new(&path)).unwrap();
    assert!(written.starts_with("lambda,E_num,E_inferred,cr_product"));
    std::fs::remove_file(path).ok();
}
