use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locality")).args(args).output().expect("spawn locality")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Writes a built-in family to `dir` and returns the code and embedding paths.
fn construct(dir: &TempDir, family: &str, size: usize) -> (PathBuf, PathBuf) {
    let code = dir.path().join(format!("{family}{size}.code.json"));
    let emb = dir.path().join(format!("{family}{size}.emb.json"));
    let o = run(&["construct", "--family", family, "--size", &size.to_string(), "--code-out", p(&code), "--embedding-out", p(&emb)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (code, emb)
}

#[test]
fn params_of_bacon_shor() {
    let dir = TempDir::new().unwrap();
    let (code, _) = construct(&dir, "bacon-shor", 3);
    let o = run(&["params", p(&code), "--weight-cap", "3", "--text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for kv in ["n=9", "k=1", "g=4", "s=4", "r=12", "d=3"] {
        assert!(out.contains(kv), "{kv} missing from {out}");
    }
    let v = json(&run(&["params", p(&code)]));
    assert_eq!(v["n"], 9);
    assert_eq!(v["k"], 1);
}

#[test]
fn bounds_headline() {
    let o = run(&["bounds", "-n", "1e6", "-k", "1e4", "-d", "1e3", "-D", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["ell_star"].as_f64().unwrap() - 10f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["m_star"].as_f64().unwrap(), 1e4);
}

#[test]
fn contours_corner() {
    let o = run(&["contours", "--D", "2", "--class", "subsystem", "--grid-step", "0.5", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "1,1,0.5,1"), "{out}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let (code, emb) = construct(&dir, "bacon-shor", 3);
    let stuck = run(&["sweep", p(&emb), "--code", p(&code), "--strict", "--ell", "2", "--tau", "6", "-d", "3"]);
    assert_eq!(stuck.status.code(), Some(1));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["params", p(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "-n", "10", "-k", "1", "-d", "3", "-D", "1"]).status.code(), Some(2));
}

#[test]
fn tiling_is_deterministic_under_seed() {
    let dir = TempDir::new().unwrap();
    let (_, emb) = construct(&dir, "surface", 4);
    let a = run(&["tile", p(&emb), "--w", "8", "--ell", "1", "--seed", "7"]);
    let b = run(&["tile", p(&emb), "--w", "8", "--ell", "1", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn constructed_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let (code, emb) = construct(&dir, "surface", 3);
    let c1 = std::fs::read_to_string(&code).unwrap();
    let again = dir.path().join("again.json");
    let v: Value = serde_json::from_str(&c1).unwrap();
    std::fs::write(&again, serde_json::to_string(&v).unwrap()).unwrap();
    let a = json(&run(&["params", p(&code)]));
    let b = json(&run(&["params", p(&again)]));
    assert_eq!(a, b);
    assert_eq!(a["n"], 9);
    let o = run(&["interactions", p(&code), p(&emb), "--ell", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
}
