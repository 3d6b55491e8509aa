use std::fs;
use std::process::Command;

use detzeta::cli::{
    cmd_determinant, cmd_factor, cmd_slits, cmd_spectrum, cmd_validate, CommandKind, RunConfig,
};
use detzeta::determinant::FactorKind;
use detzeta::model::{examples, save_model};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_detzeta"))
}

fn read(path: &std::path::Path) -> String {
    fs::read_to_string(path).unwrap()
}

fn column(text: &str, col: usize) -> Vec<f64> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v");
    let ok = bin()
        .args(["validate", "--example", "linear-saddle", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));

    let broken = bin()
        .args(["validate", "--example", "broken-inclusion", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(broken.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(&read(&out.join("validation.json"))).unwrap();
    assert_eq!(report["ok"], false);
    assert_eq!(report["witness"].as_array().unwrap().len(), 4);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let parse = bin()
        .args(["validate", "--model"])
        .arg(&bad)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("parse"));

    let usage = bin()
        .args(["determinant", "--order", "0", "--example", "linear-saddle"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let unknown = bin().arg("frobnicate").output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn model_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e2.json");
    save_model(&examples::two_symbol_affine(), &path).unwrap();
    let cfg = RunConfig::new(CommandKind::Validate, dir.path().join("v")).with_model(&path);
    assert_eq!(cmd_validate(&cfg).unwrap().status, 0);
}

#[test]
fn linear_saddle_determinant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(CommandKind::Determinant, dir.path())
        .with_example("linear-saddle")
        .with_order(20);
    assert_eq!(cmd_determinant(&cfg).unwrap().status, 0);
    let c = column(&read(&dir.path().join("coefficients.csv")), 1);
    assert_eq!(c[1], -2.0);
    let summary: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("summary.json"))).unwrap();
    assert!((summary["smallest_zero"]["re"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn affine_traces_positive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(CommandKind::Determinant, dir.path())
        .with_example("two-symbol-affine")
        .with_order(15);
    assert_eq!(cmd_determinant(&cfg).unwrap().status, 0);
    let d = column(&read(&dir.path().join("traces.csv")), 1);
    assert_eq!(d.len(), 15);
    assert!(d.iter().all(|&x| x > 0.0));
}

#[test]
fn parabolic_determinant_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(CommandKind::Determinant, dir.path())
        .with_example("parabolic-Pa")
        .with_order(12);
    assert_eq!(cmd_determinant(&cfg).unwrap().status, 0);
}

#[test]
fn csv_uses_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::new(CommandKind::Determinant, dir.path())
        .with_example("linear-saddle")
        .with_order(3);
    cmd_determinant(&cfg).unwrap();
    let text = read(&dir.path().join("traces.csv"));
    let second = text.lines().nth(2).unwrap();
    assert_eq!(second, "2,4.4444444444444442e-1");
    assert_eq!(
        second.split(',').nth(1).unwrap().parse::<f64>().unwrap(),
        4.0 / 9.0
    );
}

#[test]
fn slit_commands() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(CommandKind::Slits, dir.path().join("a"));
    cfg.lambda_e = Some(1.0);
    cfg.lambda_f = Some(2.0);
    cmd_slits(&cfg).unwrap();
    let x = column(&read(&dir.path().join("a/slit_points.csv")), 1);
    assert_eq!(x.len(), 100);
    assert_eq!(x.iter().cloned().fold(f64::NAN, f64::max), 0.5);

    let mut cfg = RunConfig::new(CommandKind::Slits, dir.path().join("b"));
    cfg.lambda_e = Some(-1.0);
    cfg.lambda_f = Some(2.0);
    cfg.period = 2;
    cmd_slits(&cfg).unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("b/slits.json"))).unwrap();
    assert_eq!(doc[0]["segments"].as_array().unwrap().len(), 4);
    assert_eq!(
        column(&read(&dir.path().join("b/slit_points.csv")), 1).len(),
        400
    );

    let cfg =
        RunConfig::new(CommandKind::Slits, dir.path().join("c")).with_example("two-symbol-affine");
    assert_eq!(cmd_slits(&cfg).unwrap().status, 0);
    assert_eq!(read(&dir.path().join("c/slits.json")).trim(), "[]");
}

#[test]
fn spectrum_commands() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg =
        RunConfig::new(CommandKind::Spectrum, dir.path().join("a")).with_example("parabolic-Pa");
    cfg.nodes = 12;
    cmd_spectrum(&cfg).unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("a/prediction.json"))).unwrap();
    assert_eq!(doc[0]["predicted_interval"], serde_json::json!([0.0, 1.0]));
    let w = column(&read(&dir.path().join("a/witnesses.csv")), 1);
    assert!(w.iter().all(|&v| (0.0..=1.0).contains(&v)));

    let mut cfg = RunConfig::new(CommandKind::Spectrum, dir.path().join("b"))
        .with_example("linear-saddle")
        .with_order(20);
    cfg.nodes = 24;
    cmd_spectrum(&cfg).unwrap();
    let ev = read(&dir.path().join("b/eigenvalues.csv"));
    let first: f64 = ev
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((first - 0.5).abs() < 1e-6);
    let cross = read(&dir.path().join("b/crosscheck.csv"));
    assert!(column(&cross, 5)[0] < 1e-4);
}

#[test]
fn factor_command() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(CommandKind::Factor, dir.path());
    assert_eq!(cmd_factor(&cfg).unwrap_err().exit_code(), 2);
    cfg.kind = Some(FactorKind::Sink);
    cfg.lambda_e = Some(0.25);
    cfg.lambda_f = Some(0.5);
    cfg.period = 2;
    cmd_factor(&cfg).unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("factor.json"))).unwrap();
    assert!(doc["min_modulus"].as_f64().unwrap() > 0.0);
    cfg.lambda_f = Some(2.0);
    assert_eq!(cmd_factor(&cfg).unwrap_err().exit_code(), 1);
}

#[test]
fn pinning_check_binary() {
    let dir = tempfile::tempdir().unwrap();
    let st = bin()
        .args([
            "pinning-check",
            "--example",
            "parabolic-Pb",
            "--order",
            "4",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("pinning_summary.json"))).unwrap();
    assert!(doc["max_residual"].as_f64().unwrap() <= 1e-9);
    let st = bin()
        .args([
            "pinning-check",
            "--example",
            "parabolic-Pb",
            "--order",
            "3",
            "--tol",
            "1e-30",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
}
