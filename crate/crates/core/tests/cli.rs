//! End-to-end runs of the `knotthin` binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_knotthin"));
    cmd.args(args).env_remove("KNOTTHIN_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    cmd.output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args, None).status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["invariants", "--pq", "3", "1"]), 0);
    assert_eq!(code(&["certify", "--pq", "0", "0", "--N", "5"]), 2);
    assert_eq!(code(&["hkr", "--pq", "4", "2", "--N", "5"]), 2);
    assert_eq!(code(&["hkr", "--pq", "3", "1", "--N", "3"]), 4);
    assert_eq!(code(&["hkr", "--pq", "3", "1", "--N", "3", "--conjectural"]), 0);
    assert_eq!(code(&["--node-budget", "3", "invariants", "--pq", "41", "12"]), 3);
    assert_eq!(code(&["invariants", "--pd", "/nonexistent/file.pd"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn trefoil_plain_and_csv() {
    let out = run(&["--format", "plain", "hkr", "--pq", "3", "1", "--N", "5"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("thin"), "{text}");
    let out = run(&["--format", "csv", "hkr", "--sweep", "5", "--N", "5"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "p,q,cf,components,det,sigma,homfly_json,pN_json,thin_verdict");
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().any(|r| r.starts_with("3,1,3,1,3,2,")), "{rows:?}");
    assert!(rows.iter().all(|r| r.ends_with(",thin")), "{rows:?}");
}

#[test]
fn cache_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--format", "csv", "hkr", "--sweep", "15", "--N", "6"];
    let uncached = run(&args, None);
    let cold = run(&args, Some(dir.path()));
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_some(), "cache stayed empty");
    let warm = run(&args, Some(dir.path()));
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, uncached.stdout);
}

#[test]
fn certify_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let out = run(&["certify", "--sweep", "9", "--N", "5", "--out", out_dir, "--verify"], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["failed"], 0);
    let mut files: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path().to_str().unwrap().to_owned())
        .collect();
    files.sort();
    assert_eq!(files.len() as u64, summary["produced"].as_u64().unwrap());
    let mut args = vec!["check", "--N", "5"];
    args.extend(files.iter().map(String::as_str));
    assert_eq!(run(&args, None).status.code(), Some(0));

    // a tampered certificate is rejected with exit 5
    let victim = files.iter().find(|f| f.contains("K_9_2")).unwrap();
    let mut cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(victim).unwrap()).unwrap();
    cert["det"] = serde_json::json!(10);
    std::fs::write(victim, cert.to_string()).unwrap();
    let out = run(&["check", "--N", "5", victim], None);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stdout).contains("det"));
}

#[test]
fn output_is_stable() {
    let args = ["invariants", "--cf", "2,1,3"];
    assert_eq!(run(&args, None).stdout, run(&args, None).stdout);
}
