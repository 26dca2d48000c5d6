use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn squarecat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squarecat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("squarecat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn disk(n: i64) -> String {
    json!({"schema": "squarecat/1", "p": 2, "lo": n - 1, "hi": n, "dims": [1, 1], "d": {n.to_string(): [[1]]}}).to_string()
}

#[test]
fn suite_passes_with_exit_zero() {
    let out = squarecat(&["suite", "cube-axioms", "--max-dim", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["schema"], "squarecat/1");
    assert_eq!(r["suite"], "cube-axioms");
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["config"]["max_dim"], 1);
    assert_eq!(r["hash"].as_str().unwrap().len(), 64);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["suite", "mapspace-pi0", "--max-dim", "2", "--seed", "5", "--battery", "8"];
    let (a, b) = (squarecat(&args), squarecat(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = squarecat(&["suite", "mapspace-pi0", "--max-dim", "2", "--seed", "6", "--battery", "8"]);
    assert_ne!(report(&a)["hash"], report(&c)["hash"]);
}

#[test]
fn empty_battery_is_vacuous() {
    let out = squarecat(&["suite", "conditions-agree", "--battery", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["verdict"], "vacuous");
}

#[test]
fn failing_checks_exit_one() {
    let out = squarecat(&["square", "coherence", "--interval", "discrete", "--max-dim", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "fail");
    assert!(stderr(&out).contains("FAIL coherent-cylinder"));
    let out = squarecat(&["square", "coherence", "--max-dim", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn schema_errors_exit_two_with_location() {
    let out = squarecat(&["suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = scratch("bad-config.json", r#"{"p": 2, "seed": "seven"}"#);
    let out = squarecat(&["suite", "coherence", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at seed"), "{}", stderr(&out));

    let broken = scratch("broken.json", "{\"p\": 2,\n \"lo\": }");
    let out = squarecat(&["chain", "homology", "--input", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let ragged = json!({"p": 2, "lo": 0, "hi": 1, "dims": [1, 1], "d": {"1": [[1, 0]]}});
    let ragged = scratch("ragged.json", &ragged.to_string());
    let out = squarecat(&["chain", "homology", "--input", ragged.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at d.1[0]"), "{}", stderr(&out));

    let tagged = scratch("future.json", &json!({"schema": "squarecat/2", "p": 2, "lo": 0, "hi": 0, "dims": [1], "d": {}}).to_string());
    let out = squarecat(&["chain", "homology", "--input", tagged.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("schema"));

    let out = squarecat(&["suite", "coherence", "--degree-window", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("config.json", r#"{"schema": "squarecat/1", "p": 3, "max_dim": 1, "seed": 4}"#);
    let out = squarecat(&["suite", "coherence", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["config"]["p"], 3);
    assert_eq!(r["config"]["seed"], 9);
    assert_eq!(r["config"]["max_dim"], 1);
}

#[test]
fn report_goes_to_file() {
    let path = std::env::temp_dir().join(format!("squarecat-report-{}.json", std::process::id()));
    let out = squarecat(&["suite", "barcobar-counit", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["config"]["weight_cap"], 6);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn mapspace_verbs() {
    let x = scratch("d1.json", &disk(1));
    let y = scratch("s0.json", &json!({"p": 2, "lo": 0, "hi": 0, "dims": [1], "d": {}}).to_string());
    let (x, y) = (x.to_str().unwrap(), y.to_str().unwrap());
    let out = squarecat(&["mapspace", "build", "--x", x, "--y", x, "--max-dim", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["checks"][0]["evidence"]["dims"][0], 1);
    let out = squarecat(&["mapspace", "pi0", "--x", x, "--y", y, "--max-dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    // D1 is contractible: one homotopy class
    assert_eq!(report(&out)["checks"][0]["evidence"]["pi0_size"], "1");
    let out = squarecat(&["mapspace", "homology", "--x", y, "--y", x, "--max-dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["checks"][0]["evidence"]["mapping"], json!([0, 0, 0]));
    let out = squarecat(&["mapspace", "pi0", "--x", x, "--y", y, "--field", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn barcobar_on_an_algebra_file() {
    // F[x]/x^2, |x| = 0, with 1 and x as basis
    let a = json!({
        "schema": "squarecat/1",
        "p": 2,
        "degrees": [0, 0],
        "d": [],
        "products": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]],
        "unit": [[0, 1]],
        "augmentation": [1, 0],
    });
    let path = scratch("dual.json", &a.to_string());
    let out = squarecat(&["barcobar", "counit-check", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["checks"].as_array().unwrap().len(), 2);
    let out = squarecat(&["barcobar", "c0-check", "--algebra", path.to_str().unwrap(), "--degree-window", "-1:4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["checks"][0]["evidence"]["safe"], json!([0, 1, 2, 3]));

    let mut bad = a.clone();
    bad["products"][1] = json!([0, 7, 1, 1]);
    let path = scratch("bad-algebra.json", &bad.to_string());
    let out = squarecat(&["barcobar", "counit-check", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("products[1]"), "{}", stderr(&out));
}

#[test]
fn homology_verbs() {
    let c = scratch("d2.json", &disk(2));
    let out = squarecat(&["chain", "homology", "--input", c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["checks"][0]["evidence"]["homology"], json!({"1": 0, "2": 0}));

    // a circle: one vertex, one edge
    let circle = json!({
        "cells": [{"id": "v", "dim": 0}, {"id": "e", "dim": 1}],
        "faces": {"e:0:0": {"eta": [], "cell": "v"}, "e:0:1": {"eta": [], "cell": "v"}},
    });
    let path = scratch("circle.json", &circle.to_string());
    let out = squarecat(&["cset", "homology", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["checks"][0]["evidence"]["cubical"], json!([1, 1]));
}
