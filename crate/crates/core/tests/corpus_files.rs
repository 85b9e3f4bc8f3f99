use std::path::PathBuf;

use morse_orbit::engine::verify::{verify_instance, VerifyOptions};
use morse_orbit::engine::{analyze_instance, Certification};
use morse_orbit::model::{parse_instance, ModelError, ProblemInstance};

fn read(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn parse(name: &str) -> Result<ProblemInstance, ModelError> {
    parse_instance(&read(name))
}

const VALID: [&str; 7] = [
    "tree_a.json",
    "tree_b.json",
    "two_piece.json",
    "cylinder.json",
    "auto_star.json",
    "nested_wreath.json",
    "wreath_m2_m3.json",
];

#[test]
fn valid_files_pass_every_check() {
    for name in VALID {
        let inst = parse(name).unwrap();
        let analysis = analyze_instance(&inst, 10_000).unwrap();
        let checks = verify_instance(&inst, &analysis, &VerifyOptions::default()).unwrap();
        for c in &checks {
            assert!(c.passed, "{name}: {} failed: {}", c.name, c.detail);
        }
    }
}

#[test]
fn expected_summaries() {
    let summary = |name: &str| {
        let a = analyze_instance(&parse(name).unwrap(), 10_000).unwrap();
        (a.target.pretty(), a.p, a.h1.unwrap().to_string(), a.verdict.description)
    };
    assert_eq!(summary("cylinder.json"), ("1".into(), 0, "0".into(), "T^0".into()));
    assert_eq!(summary("auto_star.json"), ("Z_2".into(), 1, "Z".into(), "T^1/Z_2 ≃ S^1".into()));
    let nested = summary("nested_wreath.json");
    assert_eq!((nested.0.as_str(), nested.1), ("Z_2 wr Z_2", 3));
    assert!(!nested.3.contains('≃'));
}

#[test]
fn cap_is_reported_not_enumerated() {
    let a = analyze_instance(&parse("wreath_m2_m3.json").unwrap(), 10).unwrap();
    assert!(matches!(a.certification, Certification::Skipped { .. }));
    assert!(a.h1.is_none());
}

#[test]
fn rejected_files() {
    let unsupported = |name: &str| {
        let r = parse(name).and_then(|i| i.surface.validate());
        matches!(r, Err(ModelError::UnsupportedSurface(_)))
    };
    assert!(unsupported("sphere.json"));
    assert!(unsupported("non_orientable.json"));
    assert!(matches!(parse("bad_rational.json"), Err(ModelError::Schema(_))));
    match parse("euler_violation.json") {
        Err(ModelError::InvariantViolation { invariant, ids, .. }) => {
            assert_eq!(invariant, "euler");
            assert_eq!(ids, vec!["r".to_string()]);
        }
        other => panic!("{other:?}"),
    }
}
