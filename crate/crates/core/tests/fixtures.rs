use std::path::PathBuf;

use coring_core::instance::{cohomology, full_report, galois, validate, Instance, DEFAULT_MAX_DEGREE};
use coring_core::error::Error;

const GOOD: [&str; 9] = [
    "trivial_f2",
    "trivial_q",
    "f2_f4_sweedler",
    "qx2_sweedler",
    "flip_entwining",
    "superflip_entwining",
    "cobar",
    "non_galois",
    "from_dg",
];

fn fixture(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"));
    Instance::from_file(&path).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn good_fixtures_pass_the_full_report() {
    for name in GOOD {
        let r = full_report(&fixture(name), DEFAULT_MAX_DEGREE).unwrap();
        assert!(r.passed(), "{name}");
    }
}

#[test]
fn broken_fixtures_fail_validation_and_skip_the_rest() {
    for name in ["broken_counit", "broken_balancing"] {
        let inst = fixture(name);
        assert!(!validate(&inst).unwrap().passed(), "{name}");
        let r = full_report(&inst, DEFAULT_MAX_DEGREE).unwrap();
        assert!(!r.passed());
        assert!(r.cohomology.is_empty() && !r.skipped.is_empty());
    }
}

#[test]
fn cohomology_of_the_fixtures() {
    for (name, h0) in [("trivial_f2", 2), ("trivial_q", 3), ("f2_f4_sweedler", 1), ("qx2_sweedler", 1), ("from_dg", 1)] {
        let out = cohomology(&fixture(name), DEFAULT_MAX_DEGREE, false).unwrap();
        assert!(out.passed());
        assert_eq!(out.cohomology.h(), vec![h0, 0, 0, 0], "{name}");
    }
}

#[test]
fn galois_verdicts() {
    for (name, expected) in [("f2_f4_sweedler", true), ("qx2_sweedler", true), ("non_galois", false), ("from_dg", false)] {
        let out = galois(&fixture(name), DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(out.acyclicity.galois, expected, "{name}");
        assert!(out.passed(), "{name}");
    }
}

#[test]
fn malformed_instances_name_the_offending_field() {
    let base = r#"{"name": "x", "field": "F2", "algebras": {"R": {"kind": "ground"}},
        "coring": {"kind": "trivial", "ring": "R"}}"#;
    assert!(Instance::parse(base).is_ok());
    let typo = base.replace("\"ring\"", "\"rng\"");
    let e = Instance::parse(&typo).unwrap_err().to_string();
    assert!(e.contains("coring"), "{e}");
    let missing = base.replace("\"R\"}", "\"S\"}");
    assert!(Instance::parse(&missing).is_err());
    let bad_field = base.replace("F2", "F4");
    assert!(Instance::parse(&bad_field).is_err());
    let wrong_shape = r#"{"name": "x", "field": "F2", "algebras": {"R": {"kind": "ground"}},
        "coring": {"kind": "explicit", "ring": "R", "dim": 1, "left": [[["1"]]], "right": [[["1"]]],
        "delta_lift": [["1"], ["0"]], "counit": [["1"]]}}"#;
    match Instance::parse(wrong_shape) {
        Err(Error::Invalid { path, .. }) => assert!(path.starts_with("coring"), "{path}"),
        other => panic!("expected a shape error, got {other:?}"),
    }
}
