//! End-to-end runs of the built binary: flags, exit codes, and the JSON
//! schema shape.

use std::process::Command;

fn drwlab(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_drwlab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn conductor_known_values() {
    let (out, _, code) = drwlab(&["conductor", "--p", "2", "--n", "2", "dlogt"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1");
    let (out, _, code) = drwlab(&["conductor", "--p", "2", "--n", "2", "V^1(T(1,-2))"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "2");
    let (out, _, code) = drwlab(&["conductor", "--p", "2", "--n", "2", "T(1,5)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "0");
}

#[test]
fn degree_error_exits_2() {
    let (_, err, code) = drwlab(&["conductor", "--p", "2", "--n", "2", "V^1(T(1,-2)) + d(T(1,3))*dlogt"]);
    assert_eq!(code, 2);
    assert!(err.contains("degree"), "stderr: {err}");
}

#[test]
fn usage_error_exits_2() {
    let (_, _, code) = drwlab(&["frobnicate"]);
    assert_eq!(code, 2);
    let (_, _, code) = drwlab(&[]);
    assert_eq!(code, 2);
}

#[test]
fn verify_strhwm_passes() {
    let (out, _, code) = drwlab(&["verify", "strhwm", "--p", "2", "--n", "2", "--r", "3", "--q", "1"]);
    assert_eq!(code, 0, "output: {out}");
    assert!(out.contains("[pass]"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn duality_reports_perfect() {
    let (out, _, code) = drwlab(&["duality", "--p", "2", "--n", "2", "--r", "3"]);
    assert_eq!(code, 0, "output: {out}");
    assert!(out.contains("perfect (lengths 6/6"), "output: {out}");
}

#[test]
fn json_schema_shape_and_same_verdicts() {
    let (text, _, code_t) = drwlab(&["verify", "filp-levels", "--p", "2", "--n", "2"]);
    let (json, _, code_j) = drwlab(&["verify", "filp-levels", "--p", "2", "--n", "2", "--format", "json"]);
    assert_eq!(code_t, 0);
    assert_eq!(code_j, 0);
    for key in ["\"config\":", "\"suite\":\"filp-levels\"", "\"checks\":[", "\"name\":", "\"ref\":", "\"verdict\":\"pass\"", "\"elapsed\":"] {
        assert!(json.contains(key), "missing {key} in {json}");
    }
    // Text and json carry identical verdicts.
    let text_passes = text.matches("[pass]").count();
    let json_passes = json.matches("\"verdict\":\"pass\"").count();
    assert_eq!(text_passes, json_passes);
    assert_eq!(json.matches("\"verdict\":\"fail\"").count(), 0);
}

#[test]
fn jobs_fanout_is_ordered_by_suite() {
    let (out, _, code) = drwlab(&[
        "verify", "filp-levels", "conductor", "graded", "--p", "2", "--n", "1", "--r", "2", "--jobs", "3",
    ]);
    assert_eq!(code, 0, "output: {out}");
    let i1 = out.find("suite conductor").unwrap();
    let i2 = out.find("suite filp-levels").unwrap();
    let i3 = out.find("suite graded").unwrap();
    assert!(i1 < i2 && i2 < i3, "suites not ordered by name: {out}");
}

#[test]
fn fil_basis_lists_generators() {
    let (out, _, code) = drwlab(&[
        "fil-basis", "--kind", "filp", "--p", "2", "--n", "1", "--r", "3", "--q", "1", "--window", "-6:6",
    ]);
    assert_eq!(code, 0);
    // FilP_3 at n=1, q=1 is the log space with poles of order 2.
    assert!(out.contains("1*T(1,-2)*dlogt"), "output: {out}");
    assert!(!out.contains("T(1,-3)*dlogt"), "output: {out}");
}

#[test]
fn window_flag_too_small_is_an_error() {
    let (_, err, code) = drwlab(&[
        "fil-basis", "--p", "2", "--n", "2", "--r", "6", "--q", "1", "--window", "-2:6",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("window"), "stderr: {err}");
}
