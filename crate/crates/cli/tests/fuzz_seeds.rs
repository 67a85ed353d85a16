//! Replays the fuzz corpus seeds, and every prefix of them, through the
//! same checks as the fuzz targets.

use std::path::PathBuf;

use clap::Parser as _;
use holosemi::parse;
use holosemi_cli::args::{config_to_args, Cli};
use holosemi_cli::parse_complex;
use num_complex::Complex64;

fn inputs(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut seeds: Vec<String> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    assert!(!seeds.is_empty(), "no seeds for {target}");
    seeds.sort();
    let mut out = Vec::new();
    for s in seeds {
        for end in (0..=s.len()).filter(|&i| s.is_char_boundary(i)) {
            out.push(s[..end].to_string());
        }
    }
    out
}

#[test]
fn parse_expr_seeds() {
    let mut parsed = 0;
    for s in inputs("parse_expr") {
        if let Ok(e) = parse(&s) {
            parsed += 1;
            for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, -0.25)] {
                let _ = e.eval(z);
                let _ = holosemi::taylor(&e, z, 4);
            }
        }
    }
    assert!(parsed > 10);
}

#[test]
fn expr_roundtrip_seeds() {
    for s in inputs("expr_roundtrip") {
        if let Ok(e) = parse(&s) {
            assert_eq!(parse(&e.to_string()).unwrap(), e.normalize(), "{s:?}");
        }
    }
}

#[test]
fn parse_complex_seeds() {
    for s in inputs("parse_complex") {
        if let Ok(z) = parse_complex(&s) {
            assert!(z.re.is_finite() && z.im.is_finite());
        }
    }
}

#[test]
fn run_config_seeds() {
    let mut accepted = 0;
    for s in inputs("run_config") {
        if let Ok(extra) = config_to_args(&s) {
            accepted += 1;
            let mut argv = vec!["holosemi".to_string(), "eval".to_string()];
            argv.extend(extra);
            let _ = Cli::try_parse_from(argv);
        }
    }
    assert!(accepted >= 6);
}
