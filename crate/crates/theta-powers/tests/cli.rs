//! The binary end to end: exit codes, formats and the series cache.

use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_theta-powers"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "--k", "3"]).0, 0);
    assert_eq!(run(&["classify", "--k", "x"]).0, 2);
    assert_eq!(run(&["coeff", "--k", "3"]).0, 2);
    assert_eq!(run(&["--format", "yaml", "classify", "--k", "3"]).0, 2);
    assert_eq!(run(&["--seed", "zz", "verify", "lattice"]).0, 2);
    assert_eq!(run(&["--precision", "60", "zeros", "--k", "3", "--n", "0", "--max-precision", "40"]).0, 2);
    assert_eq!(run(&["coeff", "--k", "3", "--n", "0", "--q", "1.5"]).0, 2);
    assert_eq!(run(&["zeros", "--k", "3", "--n", "0", "--window", "-0.1:-0.01", "--grid", "8"]).0, 4);
    let (code, _, err) = run(&["--precision", "20", "zeros", "--k", "3", "--n", "0", "--width", "1e-40", "--max-precision", "30"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn json_is_deterministic_and_versioned() {
    let args = ["--format", "json", "--seed", "1F", "verify", "poisson", "--precision", "20"];
    let (code, a, _) = run(&args);
    assert_eq!(code, 0);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["seed"], "0x1F");
    assert_eq!(v["config"]["precision"], 20);
    assert_eq!(v["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn series_cache_is_reused_and_repaired() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["coeff", "--k", "5", "--n", "2", "--order", "30", "--format", "json", "--cache-dir", d];
    let (_, first, _) = run(&args);
    let (_, second, _) = run(&args);
    let (a, b): (Value, Value) = (serde_json::from_str(&first).unwrap(), serde_json::from_str(&second).unwrap());
    assert_eq!(a["cache"], "computed");
    assert_eq!(b["cache"], "hit");
    assert_eq!(a["rows"], b["rows"]);

    let path = dir.path().join("gamma_k5_n2.series");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("checksum=", "checksum=0", 1)).unwrap();
    let (_, third, _) = run(&args);
    let c: Value = serde_json::from_str(&third).unwrap();
    assert_eq!(c["cache"], "recomputed");
    assert_eq!(a["rows"], c["rows"]);
}

#[test]
fn verify_failure_is_not_an_argument_error() {
    // every suite passes at the default seed
    for suite in ["identities", "routes", "lattice", "poisson"] {
        let (code, out, _) = run(&["--precision", "30", "verify", suite, "--format", "csv"]);
        assert_eq!(code, 0, "{suite}: {out}");
        assert!(out.lines().skip(1).all(|l| l.contains(",true,")), "{out}");
    }
}
