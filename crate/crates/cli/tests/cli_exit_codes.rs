//! Exit-code contract of the binary: 0 all pass, 1 task failure, 2 parse
//! error, 3 validation error.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ptwist"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

fn temp(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ptwist-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn passing_scenario_exits_zero() {
    let status = bin()
        .args(["run"])
        .arg(fixture("classify_pn_objects_q.json"))
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn missing_file_exits_two() {
    let status = bin()
        .args(["run", "/nonexistent/scenario.json"])
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn bad_json_exits_two() {
    let path = temp("bad.json", "{ not json");
    let status = bin()
        .args(["run"])
        .arg(&path)
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn non_prime_field_flag_exits_three() {
    let status = bin()
        .args(["run"])
        .arg(fixture("classify_pn_objects_q.json"))
        .args(["--field", "fp:4"])
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn failing_expectation_exits_one() {
    let scenario = r#"{
        "schema_version": 1,
        "name": "fails",
        "field": "q",
        "algebras": { "A": { "truncated_polynomial": { "n": 1, "degree": 2 } } },
        "modules": { "E": { "free": { "algebra": "A", "degrees": [0] } } },
        "tasks": [
            { "task": "classify", "object": "E", "expect": { "verdict": "neither" } }
        ]
    }"#;
    let path = temp("fails.json", scenario);
    let status = bin()
        .args(["run"])
        .arg(&path)
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn explain_known_and_unknown() {
    let out = bin().args(["explain", "p_twist"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("double cone"));
    let status = bin()
        .args(["explain", "frobnicate"])
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn reports_are_reproducible_across_processes() {
    let out1 = bin()
        .args(["run"])
        .arg(fixture("degeneration_profiles.json"))
        .args(["--seed", "0"])
        .stderr(std::process::Stdio::null())
        .output()
        .unwrap();
    let out2 = bin()
        .args(["run"])
        .arg(fixture("degeneration_profiles.json"))
        .args(["--seed", "0"])
        .stderr(std::process::Stdio::null())
        .output()
        .unwrap();
    assert_eq!(out1.status.code(), Some(0));
    assert_eq!(out1.stdout, out2.stdout);
}
