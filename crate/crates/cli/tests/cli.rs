use std::process::{Command, Output};

use serde_json::Value;

fn additive(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_additive"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_column(out: &Output, col: usize) -> Vec<i64> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn profile_anchor_image() {
    let out = additive(&[
        "profile",
        "thm11:k=1",
        "--mode",
        "additive",
        "--n-max",
        "50",
        "--prefix",
        "100000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("n,count,spread\n"));
    let counts = csv_column(&out, 1);
    assert_eq!(counts.len(), 50);
    assert!(counts.iter().all(|&c| c == 3));
}

#[test]
fn profile_ladder_abelian() {
    let out = additive(&[
        "profile",
        "ladder:n=4",
        "--mode",
        "abelian",
        "--n-max",
        "20",
        "--prefix",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(csv_column(&out, 1).iter().all(|&c| c == 4));
}

#[test]
fn profile_periodic_csv_and_json() {
    let out = additive(&["profile", "periodic:0,1", "--n-max", "3", "--prefix", "100"]);
    assert_eq!(stdout(&out), "n,count,spread\n1,2,1\n2,1,0\n3,2,1\n");
    let out = additive(&[
        "profile",
        "periodic:0,1",
        "--n-max",
        "3",
        "--prefix",
        "100",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["n"], 2);
    assert_eq!(rows[1]["count"], 1);
    assert_eq!(rows[1]["spread"], 0);
}

#[test]
fn profile_lattice_needs_mu() {
    let out = additive(&[
        "profile",
        "periodic:0,1",
        "--mode",
        "lattice",
        "--n-max",
        "3",
        "--prefix",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = additive(&[
        "profile",
        "morphic:0=0,1;1=1,0;seed=0",
        "--mode",
        "lattice",
        "--mu",
        "mu:0=1,0;1=0,1",
        "--n-max",
        "2",
        "--prefix",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,count,spread\n1,2,2\n2,3,8\n");
}

#[test]
fn profile_output_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = additive(&[
            "profile",
            "sec24",
            "--mode",
            "abelian",
            "--n-max",
            "40",
            "--prefix",
            "20000",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(!bytes.contains(&b'\r'));
}

#[test]
fn guards() {
    let out = additive(&[
        "profile",
        "periodic:0,1",
        "--n-max",
        "20000",
        "--prefix",
        "30000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--unsafe-large"));
    let out = additive(&["profile", "periodic:0,1", "--n-max", "5", "--prefix", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn anchor_exit_codes() {
    let out = additive(&["anchor", "0=0,2;1=1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["is_anchor"], true);
    assert_eq!(v["weight"], "1/1");

    let out = additive(&["anchor", "0=0;1=1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["is_anchor"], false);
    assert_eq!(v["witness"]["first"], serde_json::json!([0, 0]));
    assert_eq!(v["witness"]["second"], serde_json::json!([1]));

    assert_eq!(additive(&["anchor", "0="]).status.code(), Some(2));
}

#[test]
fn powers() {
    let out = additive(&["powers", "periodic:0,1,1,0", "--k", "2", "--prefix", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        (v["start"].as_u64(), v["block_len"].as_u64()),
        (Some(1), Some(2))
    );

    let out = additive(&[
        "powers",
        "thm11:k=1",
        "--slope",
        "1/1",
        "--div",
        "4",
        "--blocks",
        "3",
        "--prefix",
        "100000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["block_len"].as_u64().unwrap() % 4, 0);
    assert_eq!(v["count"], 3);

    let out = additive(&[
        "powers",
        "periodic:1,2,4,8,16,32",
        "--k",
        "2",
        "--prefix",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let spec = format!("file:{}", empty.display());
    let out = additive(&["powers", &spec, "--k", "2", "--prefix", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn file_words() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.txt");
    std::fs::write(&path, "0 1\n-1 2\n\t3\n").unwrap();
    let spec = format!("file:{}", path.display());
    let out = additive(&["spread", &spec, "--n-max", "2", "--prefix", "5"]);
    assert_eq!(stdout(&out), "n,spread\n1,4\n2,5\n");
}

#[test]
fn chi_slope_spread() {
    let out = additive(&["chi", "periodic:0,1", "--slope", "1/2", "--m-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_column(&out, 1), [0, 0, 0, 0, 0]);

    let out = additive(&["spread", "sec24", "--n-max", "100", "--prefix", "100000"]);
    assert!(csv_column(&out, 1).iter().all(|&s| s <= 4));

    let out = additive(&["slope", "thm11:k=2", "--prefix", "100000"]);
    let last = stdout(&out).lines().last().unwrap().to_string();
    assert_eq!(last, "100000,2,1");
}

#[test]
fn factorize() {
    let out = additive(&[
        "factorize",
        "periodic:0,1",
        "--slope",
        "1/2",
        "--prefix",
        "10",
    ]);
    assert_eq!(stdout(&out), "cut\n2\n4\n6\n8\n10\n");
    let out = additive(&[
        "factorize",
        "periodic:0,1",
        "--slope",
        "1/2",
        "--prefix",
        "9",
        "--greedy",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cuts"], serde_json::json!([2, 4, 6, 8]));
    assert_eq!(v["truncated"], true);
}

#[test]
fn intersect() {
    let out = additive(&[
        "intersect",
        "periodic:0,1",
        "periodic:0,0,1,1",
        "--n-max",
        "4",
        "--prefix",
        "100",
    ]);
    assert_eq!(stdout(&out), "n,shared\n1,2\n2,2\n3,0\n4,0\n");
}

#[test]
fn explain_round_trips() {
    for spec in [
        "periodic:0,-1,2",
        "mechanical:cf=1,2;repeat=1",
        "splice:[periodic:1|periodic:0,2|periodic:2,0];sched=0,1,0;1,1,0",
        "contract:base=(thm11:k=1);ivals=arith:3,4,2",
        " thm11:k=2 ",
    ] {
        let out = additive(&["--explain", "slope", spec]);
        assert_eq!(out.status.code(), Some(0));
        let printed = stdout(&out).trim().to_string();
        assert_eq!(printed, spec.trim());
        let a = additive(&["spread", spec, "--n-max", "30", "--prefix", "10000"]);
        let b = additive(&["spread", &printed, "--n-max", "30", "--prefix", "10000"]);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn invalid_specs_exit_2() {
    for spec in [
        "bogus",
        "periodic:",
        "splice:[periodic:1];sched=1,1",
        "morphic:0=1;1=0;seed=0",
    ] {
        let out = additive(&["spread", spec, "--n-max", "2", "--prefix", "10"]);
        assert_eq!(out.status.code(), Some(2), "{spec}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(additive(&["spread"]).status.code(), Some(2));
}
