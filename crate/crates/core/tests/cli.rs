//! End-to-end checks of the command-line interface: output shapes, exit
//! codes, and the fixture-directory resolution rules.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-exc"))
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_orderable_fixture_exits_zero() {
    let out = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["analyze", "F.4D.0123", "--full-tensor"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("- verdict: Orderable"), "{text}");
    assert!(text.contains("- strong: true"), "{text}");
    assert!(text.contains("- expectations: MATCH"), "{text}");
}

#[test]
fn analyze_cycle_fixture_reports_witness() {
    let out = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["analyze", "F.4D.0115"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("- verdict: NotOrderable"), "{text}");
    assert!(text.contains("- witness: Hom("), "{text}");
}

#[test]
fn unknown_fixture_exits_one() {
    let out = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["analyze", "F.4D.9999"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cohomology_of_trivial_class_is_one_dimensional() {
    let out = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["cohomology", "F.4D.0123", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0: 1");
}

#[test]
fn cohomology_accepts_negative_coordinates() {
    // The difference of the 0115 witness pair in both directions.
    let fwd = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["cohomology", "F.4D.0115", "--", "0,-4"])
        .output()
        .unwrap();
    assert_eq!(fwd.status.code(), Some(0));
    assert_eq!(stdout(&fwd).trim(), "3: 1");
    let bwd = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["cohomology", "F.4D.0115", "--", "0,4"])
        .output()
        .unwrap();
    assert_eq!(stdout(&bwd).trim(), "0: 35");
}

#[test]
fn cohomology_rejects_wrong_class_length() {
    let out = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["cohomology", "F.4D.0123", "1,2,3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixtures_resolve_from_environment_variable() {
    let out = bin()
        .env("TORIC_EXC_FIXTURES", fixtures_dir())
        .args(["bondal", "F.4D.0047"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "Pass");
}

#[test]
fn bondal_failure_prints_wall_and_coefficient() {
    let out = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["bondal", "F.4D.0000"])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert!(text.starts_with("Fail"), "{text}");
    assert!(text.contains("wall:"), "{text}");
    assert!(text.contains("coefficient -"), "{text}");
    assert!(text.contains("on ray ["), "{text}");
}

#[test]
fn batch_tally_and_exit_code() {
    let out = bin().arg("batch").arg(fixtures_dir()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("orderable 13 / total 22"), "{text}");
    assert!(text.contains("F.4D.0120: NotOrderable [FLAGGED]"), "{text}");
}

#[test]
fn validate_fixtures_exits_zero_on_clean_corpus() {
    let out = bin().arg("validate-fixtures").arg(fixtures_dir()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("MISMATCH"));
}

#[test]
fn expectation_mismatch_exits_two() {
    // Flip the stored verdict of an orderable fixture and analyze the copy.
    let src = fixtures_dir().join("F.4D.0123.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&src).unwrap()).unwrap();
    doc["expected_verdict"] = "not_orderable".into();
    let dir = std::env::temp_dir().join("toric-exc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = bin().arg("analyze").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("- expectations: MISMATCH"));
}

#[test]
fn dot_output_lists_every_bundle() {
    let dir = std::env::temp_dir().join("toric-exc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let dot_path = dir.join("quiver.dot");
    let out = bin()
        .args(["--fixtures"])
        .arg(fixtures_dir())
        .args(["analyze", "F.4D.0123", "--dot"])
        .arg(&dot_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("digraph"), "{dot}");
    for c in ["O(-4)", "O(-3)", "O(-2)", "O(-1)", "O(0)"] {
        assert!(dot.contains(c), "missing node {c}");
    }
}
