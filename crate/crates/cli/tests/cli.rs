use std::collections::BTreeSet;
use std::process::{Command, Output};

use betti_cli::{exit, CliError};
use betti_core::{betti_elements, factorizations, BigInt, Elem, Element, Error, Fact, Factorization, Matrix};
use serde_json::Value;

fn betti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betti")).args(args).output().unwrap()
}

fn ints(v: &Value) -> Vec<BigInt> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect()
}

fn json(args: &[&str]) -> Value {
    let out = betti(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn numerical(n: &[i64]) -> Matrix {
    Matrix::numerical(n.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["verify", "--random", "3", "--seed", "11"][..],
        &["--json", "invariants", "--nums", "30,42,70,105"],
        &["presentation", "--gens", "2 0 1; 0 2 1"],
        &["--json", "graver", "--nums", "3,5,7"],
    ] {
        let first = betti(args);
        let second = betti(args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn factorize_json_round_trips() {
    let v = json(&["--json", "factorize", "--nums", "30,42,70,105", "--element", "210"]);
    assert_eq!(ints(&v["element"]), vec![BigInt::from(210)]);
    let got: Vec<Fact> = v["factorizations"].as_array().unwrap().iter().map(|u| Factorization::new(ints(u))).collect();
    let want = factorizations(&numerical(&[30, 42, 70, 105]), &Element::new(vec![BigInt::from(210)])).unwrap();
    assert_eq!(got, want.factorizations());
}

#[test]
fn betti_json_round_trips() {
    let v = json(&["--json", "betti", "--gens", "1 1 1 0 0 0; 1 0 0 1 1 0; 0 1 0 1 0 1; 0 0 1 0 1 1"]);
    let got: BTreeSet<Elem> = v["betti"].as_array().unwrap().iter().map(|e| Element::new(ints(e))).collect();
    assert_eq!(got.len(), 1);
    let a = Matrix::from_rows(vec![
        vec![1, 1, 1, 0, 0, 0],
        vec![1, 0, 0, 1, 1, 0],
        vec![0, 1, 0, 1, 0, 1],
        vec![0, 0, 1, 0, 1, 1],
    ]
    .into_iter()
    .map(|r| r.into_iter().map(BigInt::from).collect())
    .collect())
    .unwrap();
    assert_eq!(&got, betti_elements(&a).unwrap().elements());
}

#[test]
fn exit_codes() {
    assert_eq!(betti(&["factorize", "--nums", "3,5", "--element", "7"]).status.code(), Some(exit::PROPERTY_FALSE));
    assert_eq!(betti(&["check-single-betti", "--nums", "3,5,7"]).status.code(), Some(exit::PROPERTY_FALSE));
    assert_eq!(betti(&["check-single-betti", "--nums", "6,10,15"]).status.code(), Some(exit::SUCCESS));
    assert_eq!(betti(&["betti", "--nums", "4,6"]).status.code(), Some(exit::PARSE));
    assert_eq!(betti(&["betti", "--gens", "1 x"]).status.code(), Some(exit::PARSE));
    assert_eq!(betti(&["no-such-command"]).status.code(), Some(exit::PARSE));
    assert_eq!(betti(&["--help"]).status.code(), Some(exit::SUCCESS));
    let bound = CliError::Core(Error::BoundExceeded { what: "search", limit: "1".into(), partial: None });
    assert_eq!(bound.exit_code(), exit::RESOURCE_BOUND);
}

#[test]
fn stdin_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_betti"))
        .args(["--json", "betti"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"numbers": ["30", 42, 70, 105]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(ints(&v["betti"][0]), vec![BigInt::from(210)]);
}
