//! The binary's commands and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinwheel")).args(args).output().expect("binary runs")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pinwheel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const TRIANGLE: &str = r#"{"field": "rational", "vertices": [[0, 0], [1, 3], [4, 0]]}"#;
const KITE: &str = r#"{"field": {"quad": 5}, "vertices": [["-1", "0"], ["0", "1"], [{"a": "0", "b": "1", "d": 5}, "0"], ["0", "-1"]]}"#;

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn validate_reports_strips_and_rejects_squares() {
    let tri = scratch("tri.json", TRIANGLE);
    let out = bin(&["validate", tri.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("strips:") && text.contains("admissible paths: 3"));

    let sq = scratch("square.json", r#"{"vertices": [[0, 0], [0, 1], [1, 1], [1, 0]]}"#);
    let out = bin(&["validate", sq.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("parallel"));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(bin(&["validate", "/nonexistent/polygon.json"]).status.code(), Some(2));
    let bad = scratch("bad.json", "{\"vertices\": [[0, 0], [1,");
    let out = bin(&["classify", bad.to_str().unwrap(), "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 1"));
    let tri = scratch("tri.json", TRIANGLE);
    assert_eq!(bin(&["classify", tri.to_str().unwrap(), "--point", "1;1"]).status.code(), Some(2));
}

#[test]
fn classify_worked_point_and_undefined_points() {
    let tri = scratch("tri.json", TRIANGLE);
    let out = bin(&["classify", tri.to_str().unwrap(), "--point", "8,-2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "pinwheel.classify/1");
    assert_eq!(v["image"], serde_json::json!(["10", "4"]));
    assert_eq!(v["bounded"], false);
    // Inside the polygon, and on the extension of an edge.
    assert_eq!(bin(&["classify", tri.to_str().unwrap(), "--point", "1,1"]).status.code(), Some(3));
    assert_eq!(bin(&["classify", tri.to_str().unwrap(), "--point", "9,0"]).status.code(), Some(3));
}

#[test]
fn orbit_export_and_svg() {
    let tri = scratch("tri.json", TRIANGLE);
    let svg = std::env::temp_dir().join(format!("pinwheel-cli-orbit-{}.svg", std::process::id()));
    let out = bin(&["orbit", tri.to_str().unwrap(), "--point", "8,-2", "--map", "psistar", "--steps", "12", "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["map"], "psistar");
    assert_eq!(v["entries"].as_array().unwrap().len(), 13);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("id=\"orbit\""));
    let _ = std::fs::remove_file(svg);

    let out = bin(&["orbit", tri.to_str().unwrap(), "--point", "8,-2", "--steps", "1000", "--escape", "5"]);
    let v = json(&out);
    assert_eq!(v["entries"].as_array().unwrap().last().unwrap()["event"], "escaped");
}

#[test]
fn verify_random_passes() {
    let out = bin(&["verify", "--random", "n=4", "count=2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8(out.stdout).unwrap().contains("0 failed"));
}

#[test]
fn quasi_reports_triangle_area() {
    let tri = scratch("tri.json", TRIANGLE);
    let out = bin(&["quasi", tri.to_str().unwrap(), "--m", "2", "--samples", "20", "--certify", "12,1/5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["areas"], serde_json::json!(["48", "48", "48"]));
    assert_eq!(v["necklace"]["passed"], true);
    assert_eq!(v["certificate"]["bounded"], true);
}

#[test]
fn quadratic_field_files() {
    let kite = scratch("kite.json", KITE);
    let out = bin(&["quasi", kite.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"]["quasirational"], false);
    let out = bin(&["quasi", kite.to_str().unwrap(), "--certify", "5,1/3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not quasirational"));

    let wrong = scratch("wrong.json", &KITE.replace("\"d\": 5", "\"d\": 3"));
    let out = bin(&["validate", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("mismatch"));
}
