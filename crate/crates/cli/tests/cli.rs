mod common;

use common::run;
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = run(&a);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}")))
}

fn re(v: &Value) -> f64 {
    v["re"].as_f64().unwrap()
}

#[test]
fn parabolic_generator_is_recognized() {
    let (code, v) = json(&["check-generator", "--func", "(z-1)*(1-z)"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["passed"], true);
    assert!((re(&r["dw"]) - 1.0).abs() < 1e-9);
    assert_eq!(r["type"], "BoundaryParabolic");
}

#[test]
fn reversed_flow_is_not_a_generator() {
    let (code, out, _) = run(&["check-generator", "--func", "-z"]);
    assert_eq!(code, 1);
    assert!(out.contains("not_generator"));
}

#[test]
fn opposite_groups_commute() {
    let (code, v) = json(&["commute", "--f", "z^2-1", "--g", "1-z^2"]);
    assert_eq!(code, 0);
    assert!((re(&v["results"]["alpha"]) + 1.0).abs() < 1e-9);
    assert_eq!(v["results"]["opposite_fixed_points"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "--func", "z+", "--at", "0"]).0, 2);
    assert_eq!(run(&["eval", "--func", "z", "--at", "z"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["eval", "--func", "1/z", "--at", "0"]).0, 3);
    assert_eq!(run(&["abel", "--func", "z"]).0, 1);
    assert_eq!(run(&["rigidity", "--func", "(z-1)*(1-z)"]).0, 1);
    assert_eq!(run(&["commute", "--f", "z", "--g", "z^2-1"]).0, 1);
    assert_eq!(run(&["bounds", "--func", "z^2", "--self-map"]).0, 2);
    assert_eq!(run(&["flow", "--func", "z", "--z0", "1.5"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check-generator"));
}

#[test]
fn diagnostics_are_one_line() {
    let (_, out, err) = run(&["eval", "--func", "1/z", "--at", "0"]);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("holosemi: error:"));
}

#[test]
fn flow_prints_csv() {
    let (code, out, _) = run(&["flow", "--func", "z", "--z0", "0.5", "--t-end", "1", "--steps", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,re,im");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[1] - 0.5 * (-1.0f64).exp()).abs() < 1e-9);
}

fn temp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("holosemi-{}-{name}", std::process::id()))
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let path = temp("config.json");
    std::fs::write(&path, r#"{"func": "z^2-1", "at": ["0.5"], "degree": 2}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, v) = json(&["eval", "--config", p]);
    assert_eq!(code, 0);
    assert_eq!(v["inputs"]["func"], "z^2-1");
    let (_, v) = json(&["--config", p, "eval", "--func", "z"]);
    assert_eq!(v["inputs"]["func"], "z");
    assert_eq!(v["inputs"]["degree"], 2);
    std::fs::write(&path, "[]").unwrap();
    assert_eq!(run(&["eval", "--config", p]).0, 2);
    assert_eq!(run(&["eval", "--config", "/nonexistent/holosemi.json"]).0, 2);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn out_flag_writes_the_payload() {
    let path = temp("plot.svg");
    let p = path.to_str().unwrap();
    let (code, v) = json(&["plot", "--func", "z", "--trajectories", "2", "--out", p]);
    assert_eq!(code, 0);
    assert!(v["results"].get("svg").is_none());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.contains("<svg") && svg.matches("<polyline").count() == 2);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn seed_changes_random_samples_only() {
    let (_, a) = json(&["dw", "--func", "z^2-1", "--seed", "1"]);
    let (_, b) = json(&["dw", "--func", "z^2-1", "--seed", "2"]);
    assert_eq!(a["results"]["dw"], b["results"]["dw"]);
    assert_ne!(a["results"]["convergence"], b["results"]["convergence"]);
}
