use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_joinlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn golden_measures() {
    let ex = data("ex21.json");
    let ex = ex.to_str().unwrap();
    let out = run(&["measure", "vecdelta", "--seq", ex]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 1);

    let out = run(&["measure", "vecdelta", "--seq", ex, "--order", "best"]);
    let v = json(&out);
    assert_eq!(v["value"], 13);
    assert_eq!(v["shift"]["I"].as_array().unwrap().len(), 12);

    let out = run(&["measure", "vecdelta", "--seq", ex, "--order", "odd-even"]);
    assert_eq!(json(&out)["value"], 13);

    let tree = data("overlap_k5.json");
    let out = run(&["measure", "psi", "--tree", tree.to_str().unwrap()]);
    assert_eq!(json(&out)["psi"], 1);

    let single = data("single_pathk.json");
    let out = run(&["measure", "gap", "--seq", single.to_str().unwrap()]);
    assert_eq!(json(&out)["gap"], "5");
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["measure", "psi", "--tree", "/nonexistent.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));

    let tree = data("overlap_k5.json");
    let out = run(&[
        "--limit-psi-dp",
        "2",
        "measure",
        "psi",
        "--tree",
        tree.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&[
        "verify",
        "formulas",
        "--kind",
        "C",
        "--n",
        "2",
        "--k",
        "2",
        "--class",
        "row-constrained",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["counterexample"].is_null());

    let out = run(&["verify", "lp", "--t", "1..3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn deterministic_output() {
    let args = [
        "--seed",
        "5",
        "--format",
        "csv",
        "experiment",
        "eps1",
        "--trials",
        "200",
        "--t-range",
        "2..4",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("t,trials,hits,frequency,std_error")
    );
    assert_eq!(text.lines().count(), 4);

    let a = run(&["--seed", "3", "verify", "witnesses", "--instances", "50"]);
    let b = run(&["--seed", "3", "verify", "witnesses", "--instances", "50"]);
    assert_eq!(a.stdout, b.stdout);
}
