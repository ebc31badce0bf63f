use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_blockineq"));
    c.env_remove("SOURCE_DATE_EPOCH");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const NICEEX: &str = r#"{"A":{"n":2,"re":[[0.5,0],[0,0]]},"X":{"n":2,"re":[[0,1],[0,0]]},"B":{"n":2,"re":[[0,0],[0,2]]}}"#;

#[test]
fn verify_passes_and_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let args = [
        "verify", "--dims", "1..3", "--trials", "4", "--seed", "1",
        "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = run(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        runs.push((fs::read(&out).unwrap(), fs::read(&csv).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);
    let v = json(&out);
    assert_eq!(v["report"]["summary"]["failures"], 0);
    assert_eq!(v["manifest"]["seed"], 1);
    assert!(v["manifest"]["timestamp"].is_null());
    let text = String::from_utf8(runs[0].1.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), "check_id,n,params,lhs,rhs,margin,pass");
}

#[test]
fn violations_exit_1() {
    let o = run(&["verify", "--dims", "4", "--trials", "2", "--seed", "1", "--tol-rel", "1e-300", "--tol-abs", "1e-300"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("first failure"));
}

#[test]
fn manifest_timestamp_from_environment() {
    let o = bin()
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .args(["probe", "--family", "referee"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["manifest"]["timestamp"], "1700000000");
    assert_eq!(v["manifest"]["command"][0], "probe");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["verify", "--dims", "2", "--trials", "0", "--seed", "1"])), 2);
    assert_eq!(code(&run(&["verify", "--dims", "17", "--trials", "1", "--seed", "1"])), 2);
    assert_eq!(code(&run(&["verify", "--dims", "2", "--trials", "1"])), 2);
    assert_eq!(code(&run(&["probe", "--family", "nope"])), 2);
    assert_eq!(code(&run(&["probe", "--family", "niceex", "--t-min", "2", "--t-max", "1"])), 2);
    assert_eq!(code(&run(&["search", "--n", "3", "--k", "1", "--budget", "10", "--seed", "0"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"A\": [1,").unwrap();
    let o = run(&["witness", "--block", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let not_psd = dir.path().join("np.json");
    fs::write(&not_psd, r#"{"A":{"n":1,"re":[[1]]},"X":{"n":1,"re":[[2]]},"B":{"n":1,"re":[[1]]}}"#).unwrap();
    let o = run(&["witness", "--block", not_psd.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("positive semidefinite"));

    let f = dir.path().join("nice.json");
    fs::write(&f, NICEEX).unwrap();
    assert_eq!(code(&run(&["witness", "--block", f.to_str().unwrap(), "--op", "times"])), 2);
}

#[test]
fn witness_niceex_margin_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("nice.json");
    let out = dir.path().join("w.json");
    fs::write(&f, NICEEX).unwrap();
    let o = run(&["witness", "--block", f.to_str().unwrap(), "--op", "plus", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&out);
    let agm = &v["report"]["reports"][0];
    assert_eq!(agm["claim_id"], "theorem_plus_agm");
    assert!(agm["margin"].as_f64().unwrap().abs() < 1e-10);
    assert_eq!(agm["class"], "symmetry");
    assert_eq!(v["manifest"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn probe_niceex_argmax() {
    let o = run(&["probe", "--family", "niceex", "--t-min", "0.1", "--t-max", "10", "--t-steps", "199"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["report"]["scan"]["argmax"].as_f64().unwrap() - 0.5).abs() < 0.05);
    assert!((v["report"]["scan"]["max_ratio"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let o = run(&["probe", "--family", "projection"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn search_referee_start_and_determinism() {
    let args = [
        "search", "--kind", "triangle", "--k", "2", "--n", "3", "--budget", "400", "--restarts", "4", "--seed", "3",
        "--start", "referee",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!((v["report"]["result"]["best_value"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn odd_k_search_reports_conjecture_summary() {
    let o = run(&["search", "--k", "3", "--n", "2", "--budget", "300", "--restarts", "3", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let s = &v["report"]["conjecture"];
    assert_eq!(s["conjectured_bound"], 0.75);
    assert!(s["best_value"].as_f64().unwrap() <= 0.75 + 1e-9);
    assert_eq!(s["flagged"], false);
}

#[test]
fn gram_builds_block() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    fs::write(
        &f,
        r#"{"pairs":[{"A":{"n":2,"re":[[1,0],[0,1]]},"B":{"n":2,"re":[[0,1],[1,0]]}},{"A":{"n":2,"re":[[1,2],[0,1]]},"B":{"n":2,"re":[[1,0],[0,0]],"im":[[0,1],[0,0]]}}]}"#,
    )
    .unwrap();
    let o = run(&["gram", "--factors", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["A"]["n"], 2);
    // A = Σ A_i*A_i has trace 2 + 6
    let re = &v["report"]["A"]["re"];
    assert!((re[0][0].as_f64().unwrap() + re[1][1].as_f64().unwrap() - 8.0).abs() < 1e-12);
}
