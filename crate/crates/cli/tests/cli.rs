use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hessmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hessmf")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stage<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["stages"].as_array().unwrap().iter().find(|s| s["name"] == name).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn certify_triangle() {
    let out = hessmf(&["certify", "--poly", "x0*x1*x2", "--nvars", "3", "--seed", "5"]);
    assert_eq!(code(&out), 0);
    let j = stdout_json(&out);
    assert_eq!(j["r"], 1);
    assert_eq!(j["seed"], 5);
    assert!(j["tool_version"].is_string());
    assert!(j["wall_time_ms"].is_u64());
    assert!(j["command_line"].is_array());
}

#[test]
fn certify_records_generated_seed() {
    let out = hessmf(&["certify", "--poly", "x0*x1*x2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out)["seed"].is_u64());
}

#[test]
fn certify_quadric() {
    let out = hessmf(&["certify", "--poly", "x0^2+x1^2", "--nvars", "2", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["r"], 1);
}

#[test]
fn certify_hankel_is_negative_with_witness() {
    let out = hessmf(&["certify", "--catalog", "hankel", "--rmax", "5", "--seed", "1"]);
    assert_eq!(code(&out), 2);
    let j = stdout_json(&out);
    assert!(j["r"].is_null());
    assert_eq!(j["witness"]["point"].as_array().unwrap().len(), 5);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&hessmf(&["certify", "--poly", "x0*(x1"])), 1);
    assert_eq!(code(&hessmf(&["certify", "--poly", "x0^2+x1"])), 1);
    assert_eq!(code(&hessmf(&["certify", "--catalog", "nope"])), 1);
    assert_eq!(code(&hessmf(&["certify"])), 1);
}

#[test]
fn certify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("f.txt");
    std::fs::write(&text, "x0*x1*x2\n").unwrap();
    let out = hessmf(&["certify", "--file", p(&text), "--seed", "2"]);
    assert_eq!(code(&out), 0);
    let j = stdout_json(&out);
    let json = dir.path().join("f.json");
    std::fs::write(&json, serde_json::to_string(&j["f"]).unwrap()).unwrap();
    let again = hessmf(&["certify", "--file", p(&json), "--seed", "2"]);
    assert_eq!(code(&again), 0);
    assert_eq!(stdout_json(&again)["f"], j["f"]);
}

#[test]
fn pipeline_detsym3() {
    let out = hessmf(&["pipeline", "--catalog", "detsym3", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let j = stdout_json(&out);
    for s in ["certify", "legendre", "cremona", "jordan", "secant"] {
        assert_eq!(stage(&j, s)["status"], "pass", "{s}");
    }
    assert!(j["legendre"]["g_text"].is_string());
}

#[test]
fn pipeline_weighted2_is_fake() {
    let out = hessmf(&["pipeline", "--catalog", "weighted2", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let j = stdout_json(&out);
    assert_eq!(stage(&j, "certify")["status"], "pass");
    assert_eq!(stage(&j, "fake-cremona probe")["detail"], "partial derivatives share a common factor");
    assert_eq!(stage(&j, "jordan")["status"], "skipped");
}

#[test]
fn pipeline_hesse_off_the_curve() {
    let out = hessmf(&["pipeline", "--catalog", "hesse", "--param", "lambda=2", "--seed", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reverify_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    assert_eq!(code(&hessmf(&["certify", "--poly", "x0*x1*x2", "--seed", "9", "--out", p(&cert)])), 0);
    assert_eq!(code(&hessmf(&["reverify", p(&cert)])), 0);

    let mut j: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let entry = j["Q"]["entries"].as_array_mut().unwrap().iter_mut().find(|e| !e["terms"].as_array().unwrap().is_empty()).unwrap();
    entry["terms"][0]["num"] = Value::String("12345".into());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&j).unwrap()).unwrap();
    assert_eq!(code(&hessmf(&["reverify", p(&bad)])), 3);

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&hessmf(&["reverify", p(&bad)])), 1);
}

#[test]
fn reverify_probabilistic_replay() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let out = hessmf(&["certify", "--catalog", "freudenthal", "--mode", "prob", "--trials", "20", "--seed", "4", "--out", p(&cert)]);
    assert_eq!(code(&out), 0);
    let out = hessmf(&["reverify", p(&cert)]);
    assert_eq!(code(&out), 0);
    let checks = stdout_json(&out)["checks"].as_array().unwrap().clone();
    assert!(checks.iter().any(|c| c["name"] == "replayed points match recorded digest" && c["status"] == "pass"));
}

#[test]
fn certificates_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, mode) in [(&a, "exact"), (&b, "exact")] {
        assert_eq!(code(&hessmf(&["certify", "--catalog", "det3", "--mode", mode, "--seed", "11", "--out", p(path)])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    for path in [&a, &b] {
        let out = hessmf(&["certify", "--catalog", "hesse", "--param", "lambda=2", "--mode", "prob", "--seed", "11", "--out", p(path)]);
        assert_eq!(code(&out), 2);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn catalog_list() {
    let out = hessmf(&["catalog", "list"]);
    assert_eq!(code(&out), 0);
    let names: Vec<String> =
        stdout_json(&out).as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap().to_string()).collect();
    for n in ["hesse", "detsym3", "freudenthal", "hankel", "hyperdet322"] {
        assert!(names.iter().any(|x| x == n), "{n}");
    }
}
