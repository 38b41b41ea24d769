//! End-to-end tests of the `cashfit` binary.

mod common;

use std::io::Write;
use std::process::{Command, Output};

use common::gap_dataset_csv;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cashfit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_csv(content: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(content.as_bytes()).unwrap();
    file.flush().unwrap();
    file
}

fn two_count_csv() -> String {
    let mut text = String::from("x_lo,x_hi,count\n");
    for i in 0..100 {
        let c = if i == 37 || i == 88 { 1 } else { 0 };
        text.push_str(&format!("{}.0,{}.0,{c}\n", i, i + 1));
    }
    text
}

#[test]
fn fit_gap_example_reports_standard_model() {
    let file = write_csv(&gap_dataset_csv());
    let out = run(&[
        "fit",
        file.path().to_str().unwrap(),
        "--diagnostics",
        "--oracle",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();

    assert_eq!(v["model"]["kind"], "standard");
    assert!((v["model"]["a"].as_f64().unwrap() - 0.188).abs() < 2e-3);
    assert!((v["model"]["lambda"].as_f64().unwrap() - 0.812).abs() < 5e-3);
    assert!((v["c_min"].as_f64().unwrap() - 0.078).abs() < 5e-3);

    assert_eq!(v["dataset"]["n_bins"], 9);
    assert_eq!(v["dataset"]["total_counts"], 9);
    assert_eq!(v["dataset"]["nonzero_bins"], 9);
    assert_eq!(v["dataset"]["gap_length"].as_f64().unwrap(), 3.0);
    assert_eq!(v["dataset"]["effective_range"].as_f64().unwrap(), 9.0);

    // Full diagnostics: n-1 = 8 zeros, one of them external and acceptable.
    let zeros = v["diagnostics"]["f_zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 8);
    assert_eq!(zeros.iter().filter(|z| z["external"] == true).count(), 1);
    assert_eq!(zeros.iter().filter(|z| z["acceptable"] == true).count(), 1);
    assert_eq!(
        v["diagnostics"]["g_singularities"]
            .as_array()
            .unwrap()
            .len(),
        9
    );

    assert_eq!(v["per_bin_c"].as_array().unwrap().len(), 9);
    assert_eq!(v["fallbacks"].as_array().unwrap().len(), 3);
    assert_eq!(v["standard_rejection"], Value::Null);

    // The oracle cross-check sits right on top of the fit.
    assert!(v["oracle"]["delta_c"].as_f64().unwrap().abs() < 0.05);
}

#[test]
fn fit_two_count_example_selects_pivot() {
    let file = write_csv(&two_count_csv());
    let out = run(&["fit", file.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["model"]["kind"], "pivot_a");
    assert!((v["c_min"].as_f64().unwrap() - 15.081).abs() < 5e-3);
    assert_eq!(v["standard_rejection"], "external_zero_unacceptable");
    // Without --diagnostics only the external zero is reported.
    assert_eq!(v["diagnostics"]["f_zeros"].as_array().unwrap().len(), 1);
    let fallbacks = v["fallbacks"].as_array().unwrap();
    assert_eq!(fallbacks.len(), 3);
    let c_b = fallbacks.iter().find(|f| f["kind"] == "pivot_b").unwrap()["c"]
        .as_f64()
        .unwrap();
    assert!((c_b - 18.141).abs() < 5e-3);
}

#[test]
fn fit_empty_counts_is_degenerate() {
    let file = write_csv("x_lo,x_hi,count\n0,1,0\n1,2,0\n2,3,0\n");
    let out = run(&["fit", file.path().to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["model"]["kind"], "degenerate_empty");
    assert_eq!(v["c_min"].as_f64().unwrap(), 0.0);
    assert_eq!(v["diagnostics"], Value::Null);
}

#[test]
fn fit_with_explicit_gaps_flag() {
    let csv = "x_lo,x_hi,count\n0,1,1\n1,2,1\n2,3,1\n6,6.5,1\n6.5,7,1\n7,7.5,1\n7.5,8,1\n8,8.5,1\n8.5,9,1\n";
    let file = write_csv(csv);
    let out = run(&["fit", file.path().to_str().unwrap(), "--gaps", "3:6"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dataset"]["gap_length"].as_f64().unwrap(), 3.0);
    assert_eq!(v["model"]["kind"], "standard");
}

#[test]
fn malformed_input_exits_2() {
    let file = write_csv("x_lo,x_hi,count\n0,1,1.5\n");
    let out = run(&["fit", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a non-negative integer"));

    let out = run(&["fit", "/nonexistent/data.csv"]);
    assert_eq!(out.status.code(), Some(2));

    let file = write_csv("wrong,header,here\n0,1,1\n");
    let out = run(&["fit", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Overlapping bins are a dataset validation error, still exit 2.
    let file = write_csv("x_lo,x_hi,count\n0,2,1\n1,3,1\n");
    let out = run(&["fit", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_emits_masked_csv_grid() {
    let file = write_csv(&two_count_csv());
    let out = run(&[
        "eval",
        file.path().to_str().unwrap(),
        "--grid",
        "-0.1:0.1:50",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a,F,g,lambda");
    assert_eq!(lines.len(), 52);
    // The a = 0 row: lambda = M/R = 0.02, g = 126.
    let zero_row: Vec<&str> = lines[26].split(',').collect();
    assert_eq!(zero_row[0].parse::<f64>().unwrap(), 0.0);
    assert!((zero_row[2].parse::<f64>().unwrap() - 126.0).abs() < 1e-9);
    assert!((zero_row[3].parse::<f64>().unwrap() - 0.02).abs() < 1e-15);
}

#[test]
fn eval_masks_singular_cells() {
    let file = write_csv(&two_count_csv());
    // A 2-step grid landing exactly on the pole at -1/37.5.
    let pole = -1.0 / 37.5;
    let grid = format!("{}:{}:2", pole - 0.01, pole + 0.01);
    let out = run(&["eval", file.path().to_str().unwrap(), "--grid", &grid]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mid: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(mid[1], "");
    assert_eq!(mid[2], "");
}

#[test]
fn eval_shows_sign_flip_across_the_pole() {
    // Between the external zero (-0.077) and the pole of the slope equation
    // (-0.019) the function is negative; right of the pole it is positive.
    let file = write_csv(&two_count_csv());
    let out = run(&[
        "eval",
        file.path().to_str().unwrap(),
        "--grid",
        "-0.06:-0.002:28",
    ]);
    assert!(out.status.success());
    let pole = -0.018_983;
    for line in String::from_utf8(out.stdout).unwrap().lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let a: f64 = cells[0].parse().unwrap();
        if cells[1].is_empty() {
            continue;
        }
        let f: f64 = cells[1].parse().unwrap();
        if a < pole - 1e-3 {
            assert!(
                f < 0.0,
                "expected negative slope equation at a={a}, got {f}"
            );
        } else if a > pole + 1e-3 {
            assert!(
                f > 0.0,
                "expected positive slope equation at a={a}, got {f}"
            );
        }
    }
}

#[test]
fn eval_far_grid_approaches_asymptote() {
    let file = write_csv(&two_count_csv());
    let out = run(&[
        "eval",
        file.path().to_str().unwrap(),
        "--grid",
        "1000:100000:3",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((f - 0.0508).abs() < 1e-3, "F={f} far from the asymptote");
    }
}

#[test]
fn simulate_csv_format_and_determinism() {
    let args = [
        "simulate", "--counts", "1", "--trials", "10", "--seed", "7", "--format", "csv",
    ];
    let out1 = run(&args);
    let out2 = run(&args);
    assert!(out1.status.success());
    assert_eq!(
        out1.stdout, out2.stdout,
        "same seed must reproduce bit-identically"
    );
    let text = String::from_utf8(out1.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "M,shape,trials,fraction_acceptable,fraction_Finf_negative"
    );
    let row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(row[0], "1");
    assert_eq!(row[1], "uniform");
    assert_eq!(row[2], "10");
    assert_eq!(row[3].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn simulate_json_carries_outcomes_and_metadata() {
    let out = run(&[
        "simulate",
        "--shape",
        "increasing",
        "--counts",
        "5",
        "--trials",
        "8",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metadata"]["shape"], "increasing");
    assert!(v["metadata"]["generator"]
        .as_str()
        .unwrap()
        .contains("chacha8"));
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert_eq!(points[0]["counts"], 5);
    assert_eq!(points[0]["outcomes"].as_array().unwrap().len(), 8);
}

#[test]
fn simulate_config_file_round_trip() {
    let cfg = r#"{"shape":"uniform","counts":3,"bins":50,"trials":6,"seed":11,"range":[0.0,10.0]}"#;
    let file = write_csv(cfg);
    let out = run(&[
        "simulate",
        "--config",
        file.path().to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("3,uniform,6,"));
}

#[test]
fn simulate_default_sweep_covers_count_grid() {
    let out = run(&[
        "simulate", "--trials", "2", "--seed", "1", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().count(),
        1 + cashfit::sim::DEFAULT_COUNT_GRID.len()
    );
}

#[test]
fn unknown_flag_exits_2() {
    let out = run(&["fit", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}
