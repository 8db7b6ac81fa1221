use std::process::{Command, Output};

use serde_json::Value;

fn ahall(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahall")).args(args).output().expect("ahall runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn hall_poly_on_the_two_cycle() {
    let out = ahall(&["hall-poly", "--ctx", "cyclic:2", "--triple", "[1;2)|S1|S2", "--primes", "2,3,4,5", "--verify", "7"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["poly"], serde_json::json!(["1"]));
    assert_eq!(v["verified"], true);
    let out = ahall(&["hall-poly", "--ctx", "cyclic:2", "--triple", "[1;2)|S2|S1"]);
    assert_eq!(json(&out)["text"], "0");
}

#[test]
fn hall_poly_from_a_quiver_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.txt");
    std::fs::write(&path, "vertex 1\n").unwrap();
    let out = ahall(&["hall-poly", "--quiver", path.to_str().unwrap(), "--triple", "S1^2|S1|S1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["text"], "1*q + 1");
}

#[test]
fn bad_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "vertex 1\narrow a 1 1\n").unwrap();
    assert_eq!(ahall(&["roots", "--quiver", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ahall(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(ahall(&["basis", "comp", "--cap", "1,1,1"]).status.code(), Some(2));
    assert_eq!(ahall(&["hall-poly", "--triple", "S1|S1"]).status.code(), Some(2));
}

#[test]
fn comp_basis_at_one_one() {
    let out = ahall(&["basis", "comp", "--ctx", "kronecker", "--cap", "1,1", "--emit", "N"]);
    assert!(out.status.success());
    let v = json(&out);
    let slices = v["slices"].as_array().unwrap();
    assert_eq!(slices.len(), 3);
    let last = &slices[2];
    assert_eq!(last["grading"], serde_json::json!([1, 1]));
    assert_eq!(last["elements"].as_array().unwrap().len(), 2);
    let report = ahall(&["comp-basis", "--cap", "1,1", "--emit", "report"]);
    assert!(report.status.success());
    assert_eq!(json(&report)["passed"], true);
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = |out: &str| {
        vec![
            "--cache-dir".to_string(),
            cache.display().to_string(),
            "--out".to_string(),
            dir.path().join(out).display().to_string(),
            "basis".to_string(),
            "cyclic".to_string(),
            "--rank".to_string(),
            "2".to_string(),
            "--dim".to_string(),
            "2,1".to_string(),
        ]
    };
    for name in ["a.json", "b.json"] {
        let a = args(name);
        let out = ahall(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
}

#[test]
fn suites_report_and_set_the_exit_code() {
    let out = ahall(&["verify", "--suite", "eta", "--rank", "2", "--bound", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["suite"], "eta");
    assert_eq!(v["passed"], true);
    let out = ahall(&["verify", "--suite", "serre", "--ctx", "kronecker", "--primes", "2"]);
    assert!(out.status.success());
    let roots = ahall(&["roots", "--ctx", "a2"]);
    assert!(roots.status.success());
    assert_eq!(json(&roots)["report"]["entries"].as_array().unwrap().len(), 3);
}
