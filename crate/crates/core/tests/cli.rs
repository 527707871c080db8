use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bjortho::io::write_matrix;
use bjortho::linalg::ComplexMatrix;

fn scratch(name: &str, a: &ComplexMatrix) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bjortho-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, write_matrix(a)).unwrap();
    p
}

fn raw(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bjortho-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn bjortho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bjortho")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn i2() -> PathBuf {
    scratch("i2.mat", &ComplexMatrix::identity(2))
}

fn a() -> PathBuf {
    scratch("a.mat", &ComplexMatrix::diag_real(&[-1.0, 1.0]))
}

fn b() -> PathBuf {
    scratch("b.mat", &ComplexMatrix::diag_real(&[1.0, 0.0]))
}

#[test]
fn strong_fails_for_i_and_a() {
    assert_eq!(code(&bjortho(&["check", "strong", s(&i2()), s(&a())])), 1);
}

#[test]
fn eps_strong_holds_for_i_and_b() {
    assert_eq!(code(&bjortho(&["check", "eps-strong", "--eps", "0.2", s(&i2()), s(&b())])), 0);
}

#[test]
fn exact_against_zero() {
    let z = scratch("zero.mat", &ComplexMatrix::zeros(2, 2));
    let x = raw("x.mat", "2 2\n1+2i -i\n3 0.5e-1-4i\n");
    assert_eq!(code(&bjortho(&["check", "exact", s(&x), s(&z)])), 0);
}

#[test]
fn json_report_schema() {
    let o = bjortho(&["check", "bj", "--json", "--seed", "9", s(&i2()), s(&a())]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["relation"], "bj");
    assert_eq!(v["status"], "true");
    assert!(v["margin"].is_number());
    assert!(v["timingMs"].is_number());
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["witnessTol"], 1e-7);
    assert_eq!(v["witness"]["vector"].as_array().unwrap().len(), 2);
    assert!(v["witness"]["residuals"]["normAttain"].is_number());
    assert!(v["witness"]["residuals"]["orthogonality"].is_number());

    let o = bjortho(&["check", "eps-strong", "--json", "--eps", "0.1", s(&i2()), s(&a())]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "false");
    assert_eq!(v["epsilon"], 0.1);
}

#[test]
fn tol_flag_is_echoed() {
    let o = bjortho(&["check", "exact", "--json", "--tol", "1e-5", s(&i2()), s(&b())]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["witnessTol"], 1e-5);
    assert_eq!(code(&o), 1);
}

#[test]
fn error_exit_codes() {
    let bad = raw("bad.mat", "2 2\n1 x\n0 1\n");
    let o = bjortho(&["check", "bj", s(&bad), s(&i2())]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let three = scratch("i3.mat", &ComplexMatrix::identity(3));
    assert_eq!(code(&bjortho(&["check", "bj", s(&three), s(&i2())])), 65);
    assert_eq!(code(&bjortho(&["check", "eps", s(&i2()), s(&a())])), 64);
    assert_eq!(code(&bjortho(&["check", "nope", s(&i2()), s(&a())])), 64);
    assert_eq!(code(&bjortho(&["check", "bj", "/nonexistent/x.mat", s(&a())])), 66);
}

#[test]
fn gamma_command() {
    let t = scratch("t.mat", &ComplexMatrix::diag_real(&[1.0, -1.0]));
    let o = bjortho(&["gamma", s(&t), s(&i2())]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let g = v["gamma"].as_array().unwrap();
    assert!(g[0].as_f64().unwrap().abs() < 1e-6 && g[1].as_f64().unwrap().abs() < 1e-6);
    for k in ["minValue", "pythagoreanSlack", "unique"] {
        assert!(v.get(k).is_some());
    }
    let o = bjortho(&["gamma", s(&t), s(&t)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["gamma"][0].as_f64().unwrap() + 1.0).abs() < 1e-6);
    let z = scratch("zero.mat", &ComplexMatrix::zeros(2, 2));
    assert_eq!(code(&bjortho(&["gamma", s(&t), s(&z)])), 65);
}

#[test]
fn suite_command() {
    let o = bjortho(&["suite", "--dim", "2", "--trials", "0", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["totals"]["pass"], 0);
    assert_eq!(v["properties"].as_array().unwrap().len(), 0);

    let run = || {
        let o = bjortho(&["suite", "--dim", "2", "--trials", "100", "--seed", "7", "--eps-grid", "0,0.1,0.3", "--json"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["totals"]["fail"], 0);
        v["timingMs"] = serde_json::Value::Null;
        v.to_string()
    };
    assert_eq!(run(), run());
    assert_eq!(code(&bjortho(&["suite", "--dim", "9", "--trials", "1"])), 65);
}

#[test]
fn demo_command() {
    let o = bjortho(&["demo-l2", "--N", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["norm"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["witnessIndex"], 2);
    assert_eq!(v["status"], "true");
    assert_eq!(code(&bjortho(&["demo-l2", "--N", "1"])), 64);
}
