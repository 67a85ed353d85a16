#![allow(dead_code)]

use std::path::PathBuf;

/// One fixture per subcommand (two where the subcommand has a second mode).
pub const CASES: &[(&str, i32, &[&str])] = &[
    ("eval", 0, &["eval", "--func", "z^3/(2-z)", "--at", "0.5", "--at", "-0.25+0.5*i", "--degree", "4"]),
    ("check-generator", 0, &["check-generator", "--func", "(z-1)*(1-z)"]),
    ("check-generator-negative", 1, &["check-generator", "--func", "-z"]),
    ("dw", 0, &["dw", "--func", "z^2-1"]),
    ("flow", 0, &["flow", "--func", "(z-1)*(1-z)", "--z0", "0.3+0.4*i", "--t-end", "2", "--steps", "10"]),
    ("koenigs", 0, &["koenigs", "--func", "z-z^2/2", "--degree", "12"]),
    ("abel", 0, &["abel", "--func", "(z-1)*(1-z)", "--at", "0.5", "--at", "-0.5*i"]),
    ("rigidity", 0, &["rigidity", "--func", "0.25*(z-1)^3"]),
    ("rigidity-wedge", 0, &["rigidity", "--func", "z^2-1", "--wedge", "1"]),
    ("bounds", 0, &["bounds", "--func", "z^2-1"]),
    ("bounds-self-map", 0, &["bounds", "--func", "z^2", "--tau", "1", "--self-map"]),
    ("commute", 0, &["commute", "--f", "z^2-1", "--g", "1-z^2"]),
    ("commute-coincidence", 1, &["commute", "--f", "z^2-1", "--g", "(z-1)*(1-z)", "--tau", "1"]),
    ("centralizer", 0, &["centralizer", "--func", "z^2-1"]),
    ("plot", 0, &["plot", "--func", "z^2-1", "--trajectories", "3", "--arrow-angles", "8", "--arrow-radii", "2", "--t-end", "3"]),
];

pub fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["holosemi"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = holosemi_cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// The JSON report of a fixture case at `--seed 0`.
pub fn run_case(args: &[&str]) -> (i32, String) {
    let mut a = args.to_vec();
    a.extend_from_slice(&["--json", "--seed", "0"]);
    let (code, out, _) = run(&a);
    (code, out)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

pub fn schema() -> serde_json::Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Runs every case twice; returns, per case, whether both runs agree with
/// each other and with the checked-in fixture.
pub fn determinism() -> Vec<(&'static str, Result<(), String>)> {
    CASES
        .iter()
        .map(|&(name, _, args)| {
            let (_, first) = run_case(args);
            let (_, second) = run_case(args);
            let check = if first != second {
                Err("two runs differ".to_string())
            } else {
                match std::fs::read_to_string(fixture_path(name)) {
                    Ok(f) if f == first => Ok(()),
                    Ok(_) => Err("output differs from fixture".to_string()),
                    Err(e) => Err(format!("fixture missing: {e}")),
                }
            };
            (name, check)
        })
        .collect()
}
