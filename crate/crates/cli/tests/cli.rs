use std::process::{Command, Output};

use serde_json::Value;

fn dpcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpcert")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(dpcert(&["verify"]).status.code(), Some(2));
    assert_eq!(dpcert(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dpcert(&["verify", "--n", "5", "--m", "5"]).status.code(), Some(2));
    assert_eq!(dpcert(&["verify", "--n", "2", "--field", "f8"]).status.code(), Some(2));
    assert_eq!(dpcert(&["verify", "--n", "2", "--a", "w0^3"]).status.code(), Some(2));
}

#[test]
fn forced_failure_exits_1() {
    let out = dpcert(&["verify", "--n", "5", "--a", "w1^10"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["overall"], "FAIL");
    let sq = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "squarefree_a").unwrap();
    assert_eq!(sq["status"], "FAIL");
}

#[test]
fn small_instance_passes() {
    let out = dpcert(&["verify", "--n", "1", "--a", "w0*w1", "--field", "q4", "--pretty"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\n  \"checks\""));
    let r = json(&out);
    let big = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "bigness").unwrap();
    assert_eq!(big["status"], "N/A");
}

#[test]
fn crf_oracle() {
    let out = dpcert(&["oracle", "crf", "--field", "q3x"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["agree"], true);
    assert_eq!(r["brute_force"].as_array().unwrap().len(), 7);
}

#[test]
fn singular_oracle_over_f8() {
    let out = dpcert(&["oracle", "singular", "--n", "2", "--a", "w0^4 + w0^2*w1^2 + w0*w1^3 + w1^4", "--field", "q3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["comparisons"].as_array().unwrap().len(), 12);
}

#[test]
fn ambient_dump() {
    let out = dpcert(&["ambient", "dump", "--family", "q", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["ambient"]["name"], "Q_3");
    assert_eq!(r["charts"].as_array().unwrap().len(), 8);
}

#[test]
fn smooth_in_characteristic_zero_and_two() {
    let a = "w0^4 + w0^2*w1^2 + w0*w1^3 + w1^4";
    let q = dpcert(&["smooth", "--n", "2", "--a", a, "--field", "Q"]);
    assert_eq!(q.status.code(), Some(0));
    assert_eq!(json(&q)["smooth"], true);
    let z = dpcert(&["smooth", "--n", "2", "--a", a, "--field", "q3", "--variety", "z"]);
    assert_eq!(z.status.code(), Some(0));
    // in characteristic 2 X is singular over Cr(a) x Cr(f)
    let x = dpcert(&["smooth", "--n", "2", "--a", a, "--field", "q3"]);
    assert_eq!(x.status.code(), Some(1));
    let charts = json(&x)["charts"].as_array().unwrap().clone();
    assert!(charts.iter().any(|c| c["status"] == "singular" && c["witness"]["verified"] == true));
}

#[test]
fn critical_and_bigness() {
    let out = dpcert(&["critical", "--n", "2", "--seed", "3", "--field", "q6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cr_f"].as_array().unwrap().len(), 7);
    let out = dpcert(&["bigness", "--n", "6", "--m", "4", "--field", "q10", "--samples", "50", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out);
    assert_eq!((c["k"].as_u64(), c["l"].as_u64()), (Some(8), Some(2)));
}

#[test]
fn a_from_file() {
    let dir = std::env::temp_dir().join(format!("dpcert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("a.poly");
    std::fs::write(&p, "w0*w1\n").unwrap();
    let out = dpcert(&["verify", "--n", "1", "--a-file", p.to_str().unwrap(), "--field", "q4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["a"], "w0*w1");
}

#[test]
fn workers_do_not_change_the_hash() {
    let run = |w: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_dpcert")).args(["verify", "--n", "3", "--seed", "7", "--field", "q6", "--samples", "20"]).env("DPCERT_WORKERS", w).output().unwrap();
        json(&out)["hash"].as_str().unwrap().to_string()
    };
    assert_eq!(run("1"), run("4"));
}
