use std::process::{Command, Output};

use serde_json::Value;

fn tricurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricurve")).args(args).output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("valid JSON line"))
        .collect()
}

#[test]
fn induce_fermat() {
    let out = tricurve(&["induce", "{1,3,8}"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["version"], 1);
    assert_eq!(r["torsion"]["group"], "Z/2Z x Z/2Z");
    assert_eq!(r["extension"]["e"], "120");
    assert!(r["rank"]["lower_bound"].as_u64().unwrap() >= 1);
    assert!(r["error"].is_null());
    assert!(r.get("timing_ms").is_none());
}

#[test]
fn induce_z2z8() {
    let out = tricurve(&["induce", "{4/3,-3/4,7/12}"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!((r["torsion"]["n1"].as_u64(), r["torsion"]["n2"].as_u64()), (Some(2), Some(8)));
    assert_eq!(r["torsion"]["certainty"], "exact");
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(tricurve(&["induce", "{1,2,3}"]).status.code(), Some(2));
    assert_eq!(tricurve(&["induce", "{1,3"]).status.code(), Some(2));
    assert_eq!(tricurve(&["--keep", "0", "induce", "{1,3,8}"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(tricurve(&["verify", "bogus"]).status.code(), Some(64));
    assert_eq!(tricurve(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(tricurve(&["dataset", "--tag", "nope"]).status.code(), Some(64));
    assert_eq!(tricurve(&["sieve", "--family", "NOPE", "--num", "1..2"]).status.code(), Some(64));
    assert_eq!(tricurve(&["--help"]).status.code(), Some(0));
}

#[test]
fn sieve_includes_k2() {
    let out = tricurve(&["sieve", "--family", "K_PLUSMINUS", "--num", "1..4", "--keep", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert!(recs.iter().any(|r| r["triple"] == "{1,3,120}" && r["parameter"] == "2"));
    let scores: Vec<f64> = recs.iter().map(|r| r["sieve"]["score"].as_f64().unwrap()).collect();
    assert!(scores.windows(2).all(|w| w[0] >= w[1] - 1e-9));
}

#[test]
fn sieve_is_deterministic_across_jobs() {
    let args = ["sieve", "--family", "K_PLUSMINUS", "--num", "1..20", "--den", "1..5", "--keep", "0.1", "--N", "300"];
    let one = tricurve(&[&args[..], &["--jobs", "1"]].concat());
    let four = tricurve(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn sieve_empty_range() {
    let out = tricurve(&["sieve", "--family", "K_PLUSMINUS", "--num", "5..1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn config_file_then_flags() {
    let dir = std::env::temp_dir().join(format!("tricurve-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "N = 200\nprimes = 10\n").unwrap();
    let c = cfg.to_str().unwrap();
    let r = &records(&tricurve(&["--config", c, "induce", "{1,3,8}"]))[0];
    assert_eq!(r["sieve"]["N"], 200);
    let r = &records(&tricurve(&["--config", c, "--N", "100", "induce", "{1,3,8}"]))[0];
    assert_eq!(r["sieve"]["N"], 100);
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(tricurve(&["--config", c, "induce", "{1,3,8}"]).status.code(), Some(2));
    let out = dir.join("out.jsonl");
    let o = tricurve(&["--out", out.to_str().unwrap(), "dataset", "--tag", "z2z8-connell"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().contains("\"connell\""));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_scopes() {
    let out = tricurve(&["verify", "identities"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS identities"));
    let out = tricurve(&["verify", "z2z8-connell"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("15 listed + O, group order 16"));
    assert!(text.contains("rank>=3"));
}

#[test]
fn dataset_lines() {
    let out = tricurve(&["dataset"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 52);
    assert!(recs.iter().all(|r| r["version"] == 1));
}
