use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.motive"))
}

fn amot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amot")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("amot-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn analyze_line() {
    let o = amot(&["analyze", fixture("swap_d1").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        r#"r=2 d=1 weight=1/2 pure=true semisimple=true chi="x^2-t" mu="x^2-t" epsilon="t""#
    );
}

#[test]
fn hasse_json() {
    let o = amot(&["--json", "hasse", fixture("quartic_b").to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &v["components"][0];
    assert_eq!(c["invariants"]["inf"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(c["invariants"]["char"], serde_json::json!(["0", "0"]));
    assert_eq!(v["simple"], Value::Bool(true));
}

#[test]
fn degree_of_frobenius() {
    let o = amot(&["degree-of", fixture("swap_d1").to_str().unwrap(), "--frobenius"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "degree=t"));
    assert!(out.lines().any(|l| l == "kind=purely_inseparable"));
}

#[test]
fn corpus_passes() {
    let o = amot(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    let (passed, total) = last.split_once(' ').unwrap().0.split_once('/').unwrap();
    assert_eq!(passed, total);
}

#[test]
fn failing_claim_exits_with_computation_code() {
    let dir = scratch("wrong.motive", "#! rank 3\nq 3\ne 1\ntheta 0\nr 1\nrow [0,1]\n");
    let o = amot(&["corpus", dir.parent().unwrap().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL wrong rank"));
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.motive", "q 3\nfoo 1\n");
    let o = amot(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:1"));

    let invalid = scratch("invalid.motive", "q 3\ne 1\ntheta 0\nr 1\nrow [1,1]\n");
    let o = amot(&["--json", "analyze", invalid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exit_code"], 3);
}

#[test]
fn extend_roundtrip() {
    let o = amot(&["extend", fixture("swap_d1").to_str().unwrap(), "--degree", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("e 2"));
    let p = scratch("ext.motive", &text);
    let o = amot(&["analyze", p.to_str().unwrap()]);
    // (x − t)^2 = x^2 + t·x + t^2 in characteristic 3
    assert!(stdout(&o).contains(r#"chi="x^2+t*x+t^2" mu="x-t""#));
}
