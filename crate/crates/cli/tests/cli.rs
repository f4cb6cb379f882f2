use std::fs;

use assert_cmd::Command;

fn qaffine() -> Command {
    let mut c = Command::cargo_bin("qaffine").unwrap();
    c.env_remove("QAFFINE_CUTOFF");
    c
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const X1X2: &str = include_str!("../../core/src/relations/suites/x1-x2.qrs");

#[test]
fn verify_r_reports_the_discovered_crossing_parameters() {
    let out = qaffine().arg("verify-r").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["rmatrix/ybe", "rmatrix/unitarity", "rmatrix/crossing-search"] {
        assert!(text.lines().any(|l| l.starts_with("pass") && l.contains(name)), "{name}");
    }
    assert!(text.contains("(g=3, t=1)"));
}

#[test]
fn small_cutoff_never_passes_without_verified_cells() {
    let out = qaffine().args(["verify-suites", "--cutoff", "2", "--format", "json"]).output().unwrap();
    let code = out.status.code().unwrap();
    assert!(code == 0 || code == 2, "exit {code}");
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for r in reports.as_array().unwrap() {
        let status = r["status"].as_str().unwrap();
        assert_ne!(status, "fail", "{r}");
        if status == "pass" {
            assert!(r["cells_checked"].as_u64().unwrap() > 0, "{r}");
            if let Some(w) = r.get("safe_window") {
                assert!(w["cells"].as_u64().unwrap() > 0, "{r}");
            }
        }
    }
}

#[test]
fn cutoff_below_two_is_a_configuration_error() {
    let out = qaffine().args(["verify-suites", "--cutoff", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = qaffine().arg("verify-suites").env("QAFFINE_CUTOFF", "0").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_suite_file_fails_and_names_the_relation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qrs");
    fs::write(&path, X1X2.replacen("(q - q^-1)", "(q + q^-1)", 1)).unwrap();
    let out = qaffine()
        .args(["verify-suites", "--cutoff", "4", "--file"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("fail") && l.contains("x1-x2/x1-x1+")), "{text}");
}

#[test]
fn malformed_suite_file_is_rejected_before_computing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.qrs");
    fs::write(&path, "[a] k1p(z) = k1p(z);\n[b] k1p(z) = = 0;\n").unwrap();
    let out = qaffine().args(["verify-suites", "--file"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("broken.qrs") && err.contains("line 2, column 14"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_suite_name_is_an_error() {
    let out = qaffine().args(["verify-suites", "--suite", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_reports_are_deterministic() {
    let run = || {
        let out = qaffine()
            .args(["verify-suites", "--cutoff", "3", "--suite", "x+x-,x1-x2", "--seed", "5", "--format", "json"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
    };
    let first = run();
    assert_eq!(first, run());
    assert!(first.contains("\"relation\": \"mutation\""));
    assert!(first.contains("x1w-x2z = x1-x2+ (z<->w)"));
}

#[test]
fn degenerate_compare_matches_the_rational_suite() {
    let out = qaffine().args(["degenerate", "--suite", "theorem3", "--compare"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1/(2*h)"));
    assert_eq!(text.lines().filter(|l| l.starts_with("pass") && l.contains("yangian/")).count(), 10);
}

#[test]
fn gauss_print_emits_the_leading_coefficients() {
    let out = qaffine().args(["gauss-print", "--cutoff", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 18);
}

#[test]
fn external_r_matrix_identity_passes_verify_r() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.json");
    let n = 9;
    let entries: Vec<Vec<[String; 2]>> = (0..n)
        .map(|i| (0..n).map(|j| [if i == j { "1" } else { "0" }.to_string(), "1".to_string()]).collect())
        .collect();
    let doc = serde_json::json!({ "dim": 3, "grading": [0, 1, 0], "entries": entries });
    fs::write(&path, doc.to_string()).unwrap();
    let out = qaffine().arg("verify-r").arg("--rmatrix").arg(&path).output().unwrap();
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("pass") && l.contains("rmatrix/ybe")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("pass") && l.contains("rmatrix/unitarity")), "{text}");
}

#[test]
fn malformed_r_matrix_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"dim": 3, "grading": [0, 1], "entries": []}"#).unwrap();
    let out = qaffine().arg("verify-r").arg("--rmatrix").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
