use std::process::Command;

use bmweights::cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
use serde_json::Value;

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bmweights")).args(args).output().expect("binary runs")
}

fn rows(stdout: &[u8]) -> Vec<Value> {
    let v: Value = serde_json::from_slice(stdout).expect("json output");
    assert_eq!(v["schema"], "bmweights/1");
    v["rows"].as_array().unwrap().clone()
}

#[test]
fn weights_three_one_has_six_rows() {
    let out = bin(&["weights", "--p", "3", "--f", "1"]);
    assert!(out.status.success());
    assert_eq!(rows(&out.stdout).len(), 6);

    let csv = bin(&["weights", "--p", "3", "--f", "1", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 7);
}

#[test]
fn verify_orth_exits_zero() {
    let out = bin(&["verify", "--suite", "orth", "--p", "3", "--f", "1"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let r = rows(&out.stdout);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["passed"], true);
}

#[test]
fn jh_ps_zero_one() {
    let out = bin(&["jh", "--p", "3", "--f", "1", "--type", "ps:0,1"]);
    assert!(out.status.success());
    let r = rows(&out.stdout);
    assert_eq!(r.len(), 2);
    assert_eq!(r.iter().map(|x| x["dim"].as_u64().unwrap()).sum::<u64>(), 4);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["verify", "--p", "3", "--f", "2", "--format", "csv"][..],
        &["types", "--p", "5", "--f", "1"],
        &["solve-n", "--p", "3", "--f", "2", "--weight", "w:1,0;3"],
        &["match", "--p", "5", "--f", "1", "--datum", "n1:1,3,na"],
    ] {
        let a = bin(args);
        let b = bin(&[args, &["--jobs", "1"]].concat());
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn solve_n_record_solves_the_system() {
    let out = run(["bmweights", "solve-n", "--p", "3", "--f", "1", "--weight", "w:0;0"]);
    assert_eq!(out.code, EXIT_OK);
    let r = rows(out.stdout.as_bytes());
    assert!(!r.is_empty());
    assert!(r.iter().all(|x| x["weight"] == "w:0;0" && x["coeff"].as_i64().unwrap() != 0));
}

#[test]
fn match_round_trip_through_cli() {
    let out = run(["bmweights", "match", "--p", "3", "--f", "1", "--datum", "n1:1,1,na", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = out.stdout;
    assert_eq!(text.lines().next().unwrap(), "datum,weight,s,twist,dim");
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn usage_errors_report_position() {
    let out = run(["bmweights", "jh", "--type", "ps:0,q"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("position"), "{}", out.stderr);
    assert_eq!(run(["bmweights", "frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(["bmweights", "match", "--datum", "n2:1"]).code, EXIT_USAGE);
    assert_ne!(EXIT_VERIFY_FAILED, EXIT_OK);
}
