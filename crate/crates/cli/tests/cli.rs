use std::path::PathBuf;
use std::process::{Command, Output};

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

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coring-lab"))
        .args(args)
        .env_remove("COLUMNS")
        .output()
        .expect("binary runs")
}

fn run_on(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn temp_file(tag: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("coring-lab-{}-{tag}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn every_good_fixture_validates() {
    for name in GOOD {
        let o = run_on("validate", name, &[]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains(": pass"));
    }
}

#[test]
fn broken_fixtures_fail_with_witnesses() {
    let o = run_on("validate", "broken_counit", &[]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL  coring: left counit"), "{out}");
    assert!(out.contains("at [0]: defect (1 mod 2, 0 mod 2)"), "{out}");

    let o = run_on("validate", "broken_balancing", &["--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"coring: coproduct is a bimodule map"), "{failing:?}");
    let bimodule = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "coring: coproduct is a bimodule map")
        .unwrap();
    assert!(!bimodule["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn cohomology_tables() {
    let o = run_on("cohomology", "f2_f4_sweedler", &["--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H = [1, 0, 0, 0]"));

    let o = run_on("cohomology", "trivial_f2", &[]);
    assert!(stdout(&o).contains("H = [2, 0, 0, 0]"));
    let o = run_on("cohomology", "trivial_q", &["--reduced"]);
    assert!(stdout(&o).contains("H = [3, 0, 0, 0]"));

    let o = run_on("cohomology", "cobar", &["--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["semi"], true);
    assert_eq!(v["d_squared"]["passed"], true);

    let o = run_on("cohomology", "f2_f4_sweedler", &["--max-degree", "0", "--json"]);
    let v = json(&o);
    assert_eq!(v["cohomology"]["degrees"].as_array().unwrap().len(), 1);
}

#[test]
fn reduced_complex_needs_a_grouplike() {
    let o = run_on("cohomology", "cobar", &["--reduced"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("semi-grouplike"));
}

#[test]
fn galois_verdicts() {
    for name in ["f2_f4_sweedler", "trivial_f2"] {
        let v = json(&run_on("galois", name, &["--json"]));
        assert_eq!(v["galois"], true, "{name}");
        assert_eq!(v["free_basis_certified"], true, "{name}");
        assert_eq!(v["homotopy_verified"], true, "{name}");
    }
    let o = run_on("galois", "non_galois", &["--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["galois"], false);
    assert!(v["free_basis_certified"].is_null());
    assert!(v["homotopy_verified"].is_null());
}

#[test]
fn connections_over_dual_numbers() {
    let cases = [("A", true, true), ("A_mod_x", false, false), ("A2", true, true)];
    for (module, exists, projective) in cases {
        let o = run_on("connections", "qx2_sweedler", &["--module", module, "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let v = &json(&o)[0];
        assert_eq!(v["exists"], exists, "{module}");
        assert_eq!(v["projective"], projective, "{module}");
        assert_eq!(v["cq_agree"], true, "{module}");
    }
    let o = run_on("connections", "qx2_sweedler", &["--module", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    for name in GOOD.iter().chain(&["broken_counit", "broken_balancing"]) {
        let a = run_on("report", name, &[]);
        let b = run_on("report", name, &[]);
        assert_eq!(a.stdout, b.stdout, "{name}");
        let expected = if name.starts_with("broken") { 1 } else { 0 };
        assert_eq!(a.status.code(), Some(expected), "{name}");
        let v = json(&a);
        assert_eq!(v["name"], *name);
    }
}

#[test]
fn usage_errors_exit_2() {
    let o = run(&["frobnicate", "x.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let o = run(&["validate", "/nonexistent/instance.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_field() {
    let missing = temp_file("missing", r#"{"name": "x", "field": "Q", "algebras": {}}"#);
    let o = run(&["validate", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing field `coring`"), "{}", stderr(&o));

    let text = std::fs::read_to_string(fixture("broken_counit")).unwrap();
    let truncated = temp_file("truncated", &text[..text.len() / 2]);
    let o = run(&["validate", truncated.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"), "{}", stderr(&o));

    let bad = text.replace(r#""delta_lift": [[1, 0], [0, 0], [0, 1], [0, 0]]"#, r#""delta_lift": [[1, 0], [0, 0]]"#);
    let bad = temp_file("shape", &bad);
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("coring.delta_lift: expected 4x2, got 2x2"), "{}", stderr(&o));

    let typo = text.replace(r#""counit""#, r#""counti""#);
    let typo = temp_file("typo", &typo);
    let o = run(&["validate", typo.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("coring"), "{}", stderr(&o));

    for p in [missing, truncated, bad, typo] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn columns_limits_text_width() {
    let path = fixture("broken_counit");
    let o = Command::new(env!("CARGO_BIN_EXE_coring-lab"))
        .args(["validate", path.to_str().unwrap()])
        .env("COLUMNS", "30")
        .output()
        .unwrap();
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.chars().count() <= 30), "{out}");
    assert!(out.contains('…'));
}
