use std::process::{Command, Output};

use recprimes::CensusReport;
use serde_json::Value;

fn recprimes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recprimes"))
        .args(args)
        .arg("-q")
        .env_remove("RECPRIMES_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn census_csv_has_27_rows() {
    let o = recprimes(&["census", "--seq", "geom:1,-3", "--N", "1000", "--out", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,digits,verdict,method"));
    assert_eq!(lines.count(), 27);
    assert!(!text.contains('\r'));
}

#[test]
fn empty_census_is_header_only() {
    let o = recprimes(&["census", "--seq", "geom:1,1", "--N", "0", "--out", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,digits,verdict,method\n");
}

#[test]
fn delta_json_contains_value() {
    let o = recprimes(&["delta", "--seq", "geom:1,3", "--y", "5", "--out", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["report"]["delta_decimal"].as_str().unwrap().starts_with("2.26"));
    assert_eq!(v["config"]["command"]["subcommand"], "delta");
}

#[test]
fn beta_line() {
    let o = recprimes(&["beta", "--k", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("0.373365 4.31"));
}

#[test]
fn exit_codes() {
    assert_eq!(recprimes(&["census", "--bogus"]).status.code(), Some(2));
    assert_eq!(recprimes(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(recprimes(&[]).status.code(), Some(2));
    let o = recprimes(&["census", "--seq", "nonsense", "--N", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = recprimes(&["constants", "c2", "--param", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn census_json_round_trips() {
    let o = recprimes(&["census", "--seq", "lucas:1,1", "--N", "100", "--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r: CensusReport = serde_json::from_value(v["report"].clone()).unwrap();
    assert_eq!(r.count(), 12);
    assert_eq!(serde_json::to_value(&r).unwrap(), v["report"]);
}

#[test]
fn embedded_config_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = recprimes(&["census", "--seq", "geom:3,5", "--N", "300", "--out", "json", "--threads", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, serde_json::to_string(&v["config"]).unwrap()).unwrap();
    let again = recprimes(&["--config", path.to_str().unwrap()]);
    assert!(again.status.success());
    let w: Value = serde_json::from_str(&stdout(&again)).unwrap();
    let strip = |mut x: Value| {
        x["report"]["wall_seconds"] = Value::Null;
        x
    };
    assert_eq!(strip(v), strip(w));
}

#[test]
fn resume_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("v.log");
    let log = log.to_str().unwrap();
    let first = recprimes(&["census", "--seq", "geom:1,-1", "--N", "150", "--resume", log, "--out", "csv"]);
    let second = recprimes(&["census", "--seq", "geom:1,-1", "--N", "400", "--resume", log, "--out", "csv"]);
    let fresh = recprimes(&["census", "--seq", "geom:1,-1", "--N", "400", "--out", "csv"]);
    assert!(first.status.success() && second.status.success());
    assert_eq!(stdout(&second), stdout(&fresh));
    assert_eq!(stdout(&fresh).lines().count(), 1 + 12);
}

#[test]
fn coverings_and_constants() {
    let o = recprimes(&["covering", "verify", "--name", "riesel", "--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["result"]["coverage"]["covers"], true);
    let o = recprimes(&["covering", "verify", "--seq", "geom:1,78559", "--primes", "3,5,7,13,19,37,73"]);
    assert!(stdout(&o).contains("false"));
    let o = recprimes(&["covering", "fibonacci", "--a", "1", "--b", "93687"]);
    assert!(stdout(&o).contains("true"));
    let o = recprimes(&["constants", "cvlb", "--param", "3", "--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["value_f64"], 2.25);
    assert_eq!(v["report"]["truncation"]["parameter"], "p_max");
}

#[test]
fn heartbeat_stays_off_stdout() {
    let o = Command::new(env!("CARGO_BIN_EXE_recprimes"))
        .args(["census", "--seq", "geom:1,-1", "--N", "1100", "--out", "csv"])
        .env("RUST_LOG", "info")
        .output()
        .unwrap();
    let out = stdout(&o);
    assert!(out.lines().skip(1).all(|l| l.split(',').count() == 4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("geom:1,-1"));
}

#[test]
fn omega_stats_small() {
    let o = recprimes(&["omega-stats", "--seq", "geom:1,-1", "--N", "6", "--range", "upto", "--out", "csv"]);
    let text = stdout(&o);
    let total: u32 = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u32>().unwrap()).sum();
    assert_eq!(total, 8);
}

#[test]
fn moments_tiny() {
    let o = recprimes(&["moments", "--N", "8", "--B", "10", "--k", "2", "--out", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["moment"]["value"], "97/10");
}
