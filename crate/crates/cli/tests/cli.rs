use std::path::Path;
use std::process::{Command, Output};

use modeq::format::{from_json, parse_text, JsonCoeff};
use serde_json::Value;
use tempfile::TempDir;

fn modeq(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modeq"))
        .args(args)
        .env("MODEQ_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn kiepert_five_text() {
    let dir = TempDir::new().unwrap();
    let o = modeq(dir.path(), &["kiepert", "-p", "5", "--format", "text"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "X^6 + 10*X^3 - G2*X + 5");
    assert!(dir.path().join("kiepert-5.json").exists());
}

#[test]
fn params_three_seven() {
    let dir = TempDir::new().unwrap();
    let o = modeq(dir.path(), &["params", "--p1", "3", "--p2", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for field in ["s=2", "e=1", "delta=2"] {
        assert!(text.split_whitespace().any(|w| w == field), "{text}");
    }
}

#[test]
fn unsupported_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let o = modeq(dir.path(), &["double-eta", "--p1", "2", "--p2", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(2, 3)"));
    assert_eq!(modeq(dir.path(), &["kiepert", "-p", "9"]).status.code(), Some(2));
    assert_eq!(modeq(dir.path(), &["double-eta", "--p1", "3", "--p2", "7", "--e", "2"]).status.code(), Some(2));
}

#[test]
fn text_and_json_agree() {
    let dir = TempDir::new().unwrap();
    for (args, var) in [(&["kiepert", "-p", "7"][..], "X"), (&["double-eta", "--p1", "3", "--p2", "3"][..], "F")] {
        let text = modeq(dir.path(), &[args, &["--format", "text"]].concat());
        let json = modeq(dir.path(), &[args, &["--format", "json", "--refresh"]].concat());
        assert!(text.status.success() && json.status.success());
        let from_text = parse_text(stdout(&text).trim(), var).unwrap();
        let rec: Value = serde_json::from_str(&stdout(&json)).unwrap();
        let items: Vec<JsonCoeff> = serde_json::from_value(rec["equation"].clone()).unwrap();
        let from_json = from_json(&items, "").unwrap();
        assert_eq!(from_text.coeffs, from_json.coeffs);
        assert_eq!(rec["variable"], var);
    }
}

#[test]
fn crt_matches_direct() {
    let dir = TempDir::new().unwrap();
    let direct = modeq(dir.path(), &["double-eta", "--p1", "2", "--p2", "2"]);
    let crt = modeq(dir.path(), &["double-eta", "--p1", "2", "--p2", "2", "--crt", "--primes", "8"]);
    assert!(direct.status.success() && crt.status.success());
    assert_eq!(stdout(&direct), stdout(&crt));
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("double-eta-2-2-e8-crt.json")).unwrap()).unwrap();
    assert_eq!(rec["engine"], "crt");
    assert!(rec["primes_used"].as_array().unwrap().len() >= 2);
}

#[test]
fn verify_round_trip() {
    let dir = TempDir::new().unwrap();
    assert!(modeq(dir.path(), &["double-eta", "--p1", "3", "--p2", "7"]).status.success());
    let file = dir.path().join("double-eta-3-7-e1.json");
    let o = modeq(dir.path(), &["verify", file.to_str().unwrap(), "--verify", "4", "--seed", "9"]);
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["chosen_sign"], -1);
    assert_eq!(report["samples"], 4);

    // flipping the claimed sign must be caught
    let mut rec: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    rec["sign"] = 1.into();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, rec.to_string()).unwrap();
    assert_eq!(modeq(dir.path(), &["verify", bad.to_str().unwrap()]).status.code(), Some(1));

    // so must a corrupted coefficient
    let mut rec: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    rec["equation"][0]["terms"][0]["coeff"] = "2".into();
    std::fs::write(&bad, rec.to_string()).unwrap();
    assert_eq!(modeq(dir.path(), &["verify", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn cache_is_reused_unless_refreshed() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("kiepert-5.json");
    assert!(modeq(dir.path(), &["kiepert", "-p", "5"]).status.success());
    let mut rec: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    rec["label"] = "edited".into();
    std::fs::write(&path, rec.to_string()).unwrap();
    let o = modeq(dir.path(), &["kiepert", "-p", "5", "--format", "json"]);
    let got: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(got["label"], "edited");
    let o = modeq(dir.path(), &["kiepert", "-p", "5", "--format", "json", "--refresh"]);
    let got: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(got["label"], "w_5^2");
    assert_eq!(got["tool_version"], env!("CARGO_PKG_VERSION"));

    let other = TempDir::new().unwrap();
    let flag = other.path().join("flagged");
    let o = modeq(dir.path(), &["kiepert", "-p", "5", "--cache", flag.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(flag.join("kiepert-5.json").exists());
    assert!(modeq(other.path(), &["kiepert", "-p", "5", "--no-cache"]).status.success());
    assert!(!other.path().join("kiepert-5.json").exists());
}

#[test]
fn series_output() {
    let dir = TempDir::new().unwrap();
    let o = modeq(dir.path(), &["series", "j", "--terms", "4"]);
    assert_eq!(stdout(&o).trim(), "q^-1 + 744 + 196884*q + 21493760*q^2 + O(q^3)");
    let o = modeq(dir.path(), &["series", "gamma3", "--terms", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coeffs"][2], "-492");
    assert_eq!(modeq(dir.path(), &["series", "nope"]).status.code(), Some(2));
}
