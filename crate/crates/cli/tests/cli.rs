use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .join("scenario.json")
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padchar")).args(args).env_remove("PADCHAR_SEED").output().unwrap()
}

fn run_report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let mut all: Vec<&str> = args.to_vec();
    let p = path.display().to_string();
    all.extend(["--report", &p]);
    let out = run(&all);
    let text = std::fs::read_to_string(&path).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

#[test]
fn signs_reports() {
    let (code, v) = run_report(&["signs", &fixture("c2_pgsp4_even")]);
    assert_eq!(code, 0);
    assert_eq!(v["signs"]["twisting_character"]["class"], serde_json::json!([0, 1]));
    assert_eq!(v["signs"]["levels"]["G"]["eps_unram"], "-1");

    let (code, v) = run_report(&["signs", &fixture("a1_split")]);
    assert_eq!(code, 0);
    assert_eq!(v["signs"]["composed"], "+1");
    for level in ["G", "GPrime", "H", "HPrime"] {
        assert_eq!(v["signs"]["levels"][level]["tilde_e"], "+1");
    }

    let (_, v) = run_report(&["signs", &fixture("a1_elliptic")]);
    assert_eq!(v["signs"]["levels"]["G"]["tilde_e"], "-1");
}

#[test]
fn mp_verify_runs() {
    let out = run(&["mp-verify", "--system", "A1", "--trials", "200", "--seed", "7"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("200/200"));
    let out = run(&["mp-verify", "--trials", "0"]);
    assert!(out.status.success());
    let (code, v) = run_report(&["mp-verify", "--system", "C2", "--trials", "50"]);
    assert_eq!(code, 0);
    assert_eq!(v["gxf_card_pass"], 50);
}

#[test]
fn seeds_are_deterministic() {
    let a = run_report(&["mp-verify", "--system", "B2", "--trials", "20", "--seed", "3"]).1;
    let b = run_report(&["mp-verify", "--system", "B2", "--trials", "20", "--seed", "3"]).1;
    assert_eq!(a, b);
    let env = Command::new(env!("CARGO_BIN_EXE_padchar"))
        .args(["mp-verify", "--system", "A2", "--trials", "5"])
        .env("PADCHAR_SEED", "11")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&env.stdout).contains("seed 11"));
}

#[test]
fn char_values() {
    let (code, v) = run_report(&["char", &fixture("a1_split")]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "1");
    let (_, v) = run_report(&["char", &fixture("a1_elliptic"), "--twisted"]);
    assert_eq!(v["value"], "-1");
    let (_, v) = run_report(&["char", &fixture("c2_pgsp4_odd"), "--stable"]);
    assert_eq!(v["value"], "2");
}

#[test]
fn char_lists_missing_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("a1_split")).unwrap();
    let mut s: Value = serde_json::from_str(&text).unwrap();
    s["oracles"]["orbital"] = serde_json::json!([]);
    let path = dir.path().join("s.json");
    std::fs::write(&path, s.to_string()).unwrap();
    let out = run(&["char", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orbital value for class T"));
}

#[test]
fn stability_and_anti_test() {
    for name in ["c2_pgsp4_even", "c2_pgsp4_odd"] {
        let (code, v) = run_report(&["stability", &fixture(name), "--twist", "negation", "--trials", "10"]);
        assert_eq!(code, 0);
        assert_eq!(v["holds"], true);
        assert_eq!(v["untwisted_discrepancies"][0]["discrepancy"], "-1");
    }
    let (code, _) = run_report(&["stability", &fixture("a1_elliptic"), "--twist", "identity"]);
    assert_eq!(code, 0);
    let (code, _) = run_report(&["stability", &fixture("a1_elliptic"), "--twist", "[[-1]]"]);
    assert_eq!(code, 0);
    let (code, _) = run_report(&["stability", &fixture("c2_pgsp4_even"), "--twist", "reflection:1"]);
    assert_eq!(code, 0);
    let out = run(&["stability", &fixture("a1_elliptic"), "--twist", "[[2]]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_and_disc() {
    let out = run(&["validate", &fixture("a2_rotation")]);
    assert!(out.status.success());
    let (code, v) = run_report(&["disc", &fixture("a2_rotation")]);
    assert_eq!(code, 0);
    assert_eq!(v["xstar"], "-12");

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("a1_elliptic")).unwrap();
    // a generator of F_9^× has norm −1
    let bad = text.replacen("\"residue\": [\n          0,\n          1\n        ]", "\"residue\": [1, 1]", 1);
    assert_ne!(bad, text);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, bad).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("norm-one"));
    let out = run(&["signs", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
