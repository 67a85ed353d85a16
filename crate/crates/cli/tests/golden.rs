//! Byte-for-byte JSON fixtures. Regenerate with `HOLOSEMI_BLESS=1`.

mod common;

use common::{fixture_path, run_case, schema, CASES};

#[test]
fn fixtures_reproduce() {
    let bless = std::env::var_os("HOLOSEMI_BLESS").is_some();
    let mut failures = Vec::new();
    for &(name, code, args) in CASES {
        let (got, first) = run_case(args);
        assert_eq!(got, code, "{name}: exit code");
        let (_, second) = run_case(args);
        assert_eq!(first, second, "{name}: two runs differ");
        let path = fixture_path(name);
        if bless {
            std::fs::write(&path, &first).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == first => {}
            Ok(_) => failures.push(format!("{name}: differs from {}", path.display())),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn every_subcommand_has_a_fixture() {
    for sub in holosemi_cli::args::SUBCOMMANDS {
        assert!(CASES.iter().any(|c| c.2[0] == sub), "{sub}");
    }
}

#[test]
fn reports_match_the_schema() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    for &(name, _, args) in CASES {
        let (_, out) = run_case(args);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
        assert!(errors.is_empty(), "{name}: {errors:#?}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let (_, out) = run_case(CASES[1].2);
    let mut v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(validator.is_valid(&v));
    v["results"]["dw"] = serde_json::json!([1.0, 0.0]);
    assert!(!validator.is_valid(&v));
    v.as_object_mut().unwrap().remove("results");
    assert!(!validator.is_valid(&v));
}
