use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const Z4_CODE: &str = r#"{"ring":{"kind":"Zm","m":4},"n":3,"generators":[[1,1,0],[0,0,3]]}"#;
const Z4_F: &str = r#"{"n":3,"d":1,"coeffs":[{"subset":[1],"value":"1"},{"subset":[3],"value":"-1"}]}"#;
const HAMMING: &str = r#"{"ring":{"kind":"GF","p":2,"k":1},"n":8,"generators":[[1,1,1,1,0,0,0,0],[0,0,1,1,1,1,0,0],[0,0,0,0,1,1,1,1],[0,1,0,1,0,1,0,1]]}"#;
const NOT_HARMONIC: &str = r#"{"n":3,"d":1,"coeffs":[{"subset":[1],"value":"1"}]}"#;

fn htutte(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_htutte")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn harm_basis_text_and_json() {
    let o = htutte(&["harm", "basis", "3", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "dim Harm_1(3) = 2\nb1: n=3 d=1 [{1}:1 {3}:-1]\nb2: n=3 d=1 [{2}:1 {3}:-1]\n");
    let o = htutte(&["harm", "basis", "4", "2", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn z4_enumerators() {
    let dir = TempDir::new().unwrap();
    let (c, f) = (write(&dir, "c.json", Z4_CODE), write(&dir, "f.json", Z4_F));
    let o = htutte(&["wenum", s(&c), s(&f), "-m", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("W[f] = -3*x^2*y + 3*x*y^2\n"), "{out}");
    assert!(out.contains("Z[f] = -3*x + 3*y\n"), "{out}");

    let o = htutte(&["wenum", s(&c), "basis:1"]);
    assert!(stdout(&o).contains("Z = b1*(-3*x + 3*y) + b2*(-3*x + 3*y)\n"));

    let dm = dir.path().join("dm.json");
    let o = htutte(&["dm", "from-code", s(&c), "--flavor", "alpha-beta"]);
    std::fs::write(&dm, o.stdout).unwrap();
    let o = htutte(&["dm", "check", s(&dm)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "ok\n");
    assert_eq!(stdout(&htutte(&["tutte", s(&dm), s(&f)])), "T = (x-1)*(y-1) - 1\n");
    let o = htutte(&["coboundary", s(&dm), s(&f)]);
    assert!(stdout(&o).contains("Z = -x*lambda + x + y*lambda - y\n"));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let (c, f) = (write(&dir, "c.json", Z4_CODE), write(&dir, "f.json", Z4_F));
    for kind in ["greene", "macwilliams", "dualities", "all"] {
        let o = htutte(&["verify", kind, s(&c), s(&f), "-m", "2", "--json"]);
        assert!(o.status.success(), "{kind}: {}", stdout(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["passed"], Value::Bool(true));
    }

    let bad = write(&dir, "bad.json", NOT_HARMONIC);
    let o = htutte(&["verify", "greene", s(&c), s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not harmonic"));

    let o = htutte(&["verify", "all", s(&c), s(&bad), "--allow-nonharmonic", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let witnesses: Vec<&Value> = v["checks"].as_object().unwrap().values().filter_map(|c| c.get("witness")).collect();
    assert!(!witnesses.is_empty());
}

#[test]
fn dm_check_reports_violation() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "dm.json", r#"{"n":1,"s":[["","0"],["1","2"]],"t":[["","0"],["1","1"]]}"#);
    let o = htutte(&["dm", "check", s(&bad), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], Value::Bool(false));
}

#[test]
fn code_commands() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.json", Z4_CODE);
    let o = htutte(&["code", "enumerate", s(&c), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 16);
    assert_eq!(v["weight_distribution"], serde_json::json!([1, 3, 3, 9]));
    let o = htutte(&["code", "dual", s(&c)]);
    let dual = write(&dir, "d.json", &stdout(&o));
    let o = htutte(&["code", "enumerate", s(&dual), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 4);
}

#[test]
fn molien_type_two() {
    let o = htutte(&["molien", "--type", "II", "-m", "1", "-d", "0", "-K", "32", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let coeffs: Vec<String> = serde_json::from_value(v["coefficients"].clone()).unwrap();
    for (i, c) in coeffs.iter().enumerate() {
        let want = if i % 8 == 0 { 4 * (i / 8) + 1 } else { 0 };
        assert_eq!(c, &want.to_string(), "t^{i}");
    }
    assert_eq!(v["matched"], Value::Bool(true));
    assert_eq!(v["order"], 16);
}

#[test]
fn invariance_of_hamming() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "h.json", HAMMING);
    let o = htutte(&["invariance", s(&c), "basis:0", "--type", "II", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["self_dual"], Value::Bool(true));
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens[0]["scalar"], "1");
    assert_eq!(gens[0]["agrees_with_stated"], Value::Bool(true));
}

#[test]
fn suite_is_deterministic() {
    let args = ["verify", "suite", "--cases", "6", "--max-n", "4", "--seed", "7", "--json"];
    let (a, b) = (htutte(&args), htutte(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let o = htutte(&["verify", "suite", "--max-n", "0", "--no-pinned", "--json"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "{}");
    let o = htutte(&["verify", "suite", "--cases", "3", "--max-n", "3", "--rings", "F2,Z4", "--no-pinned"]);
    assert!(stdout(&o).ends_with("3 cases, 0 failures\n"));
}
