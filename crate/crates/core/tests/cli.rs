//! The `qsingular` binary: exit codes, file formats, config precedence,
//! determinism.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qsingular"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).env_remove("QSING_OUTPUT_DIR").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(csv.as_bytes());
    rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["calogero"]).0, 0);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["calogero", "--a", "1.5"]).0, 2);
    assert_eq!(run(&["calogero", "--L-plus", "abc"]).0, 2);
    assert_eq!(run(&["spectrum"]).0, 2);
    assert_eq!(run(&["force", "--no-such-flag"]).0, 2);
    assert_eq!(run(&["berry", "--loop", "/nonexistent/loop.json"]).0, 2);
    let (code, _, err) = run(&["force", "--method", "poisson", "--t-min", "1", "--t-max", "2", "--points", "2"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("numerical"));
}

#[test]
fn output_is_deterministic() {
    let args = ["force", "--t-min", "0.1", "--t-max", "100", "--points", "40"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let args = ["loop-track", "--levels", "4", "--steps", "50"];
    assert_eq!(run(&args).1, run(&args).1);
}

#[test]
fn csv_round_trips_floats() {
    let (_, out, _) = run(&["force", "--stat", "fermi", "--t-min", "3", "--t-max", "300", "--points", "7"]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 7);
    let cfg = qsingular::statforce::GasConfig::new(100, qsingular::statforce::Statistics::Fermi, 1.0).unwrap();
    for r in rows {
        let t: f64 = r[0].parse().unwrap();
        let direct = qsingular::statforce::exact_net_force(&cfg.with_t(t)).unwrap();
        assert_eq!(r[5].parse::<f64>().unwrap(), direct.dimensionless_delta_f);
    }
}

#[test]
fn header_echoes_parameters() {
    let (_, out, _) = run(&["calogero", "--a", "0.6", "--count", "2"]);
    assert!(out.starts_with("# qsingular "));
    assert!(out.contains("# command = calogero"));
    assert!(out.contains("# a = 0.6"));
    assert!(out.contains("# count = 2"));
}

#[test]
fn json_format() {
    let (code, out, _) = run(&["--format", "json", "force-min", "--N", "50"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "force-min");
    assert_eq!(v["parameters"]["n"], 50);
    assert_eq!(v["columns"][0], "t_min");
    let t = v["rows"][0][0].as_f64().unwrap();
    assert!((30.0..35.0).contains(&t));
}

#[test]
fn config_file_sits_below_explicit_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"a": 0.6, "count": 4, "L-plus": "inf"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let (code, out, _) = run(&["calogero", "--config", c]);
    assert_eq!(code, 0);
    assert!(out.contains("# a = 0.6"));
    assert_eq!(data_rows(&out).len(), 8);
    let (_, out, _) = run(&["calogero", "--config", c, "--count", "1"]);
    assert_eq!(data_rows(&out).len(), 2);
    // boolean keys become bare flags
    std::fs::write(&cfg, r#"{"double-log": true, "points": 3}"#).unwrap();
    let (code, out, _) = run(&["force", "--config", c]);
    assert_eq!(code, 0);
    assert!(out.contains("log10_t"));
}

#[test]
fn output_dir_variable_and_explicit_output() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["calogero"]).env("QSING_OUTPUT_DIR", dir.path()).status().unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("calogero.csv")).unwrap();
    assert_eq!(data_rows(&text).len(), 20);
    let target = dir.path().join("x.json");
    let status = bin().args(["--format", "json", "berry", "--points", "3", "--output", target.to_str().unwrap()]).status().unwrap();
    assert!(status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn loop_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("loop.json");
    let pts: Vec<[f64; 2]> = (0..=100).map(|i| [0.7, 2.0 * std::f64::consts::PI * i as f64 / 100.0]).collect();
    std::fs::write(&path, serde_json::json!({"space": "sphere", "points": pts}).to_string()).unwrap();
    let (code, out, err) = run(&["berry", "--loop", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let raw: f64 = data_rows(&out)[0][1].parse().unwrap();
    assert!((raw + std::f64::consts::PI * (1.0 + 0.7f64.sin())).abs() < 1e-10);
    // an open loop is rejected
    std::fs::write(&path, r#"{"space": "sphere", "points": [[0.1, 0.0], [0.2, 1.0]]}"#).unwrap();
    assert_eq!(run(&["berry", "--loop", path.to_str().unwrap()]).0, 2);
}

#[test]
fn profile_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let (dx, half) = (0.005, 1040);
    let mut text = String::from("x,re,im\n");
    let norm = (2.0 * std::f64::consts::PI * 0.16f64).powf(-0.25);
    for i in 0..2 * half {
        let x = (i as f64 - half as f64 + 0.5) * dx;
        let v = if x > 0.0 { norm * (-(x - 2.0) * (x - 2.0) / (4.0 * 0.16)).exp() } else { 0.0 };
        text.push_str(&format!("{x},{v},0\n"));
    }
    std::fs::write(&path, text).unwrap();
    let (code, out, err) = run(&["copy-sim", "--profile", path.to_str().unwrap(), "--nmax", "150"]);
    assert_eq!(code, 0, "{err}");
    let row = &data_rows(&out)[0];
    let (ret, mir): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
    assert!((ret - 0.5).abs() < 0.01 && (mir - 0.5).abs() < 0.01, "{row:?}");
}
