use std::fs;
use std::path::PathBuf;
use std::process::Command;

use cgf_cli::report::ReportDocument;
use cgf_cli::spec_text::{parse_spec, render_spec};
use cgf_core::certify::{CertificateKind, Verdict};
use cgf_core::conjectures::ScanRecord;
use cgf_core::polyq::DEFAULT_DEGREE_CAP;
use proptest::prelude::*;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cgf").chain(args.iter().copied());
    let code = cgf_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn check_doc(spec: &str, extra: &[&str]) -> (i32, ReportDocument) {
    let mut args = vec!["check", spec];
    args.extend_from_slice(extra);
    let (code, out, err) = run(&args);
    assert!(err.is_empty(), "{err}");
    (code, serde_json::from_str(&out).unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cgf-cli-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let _ = fs::remove_file(&path);
    path
}

#[test]
fn counterexample_check_is_true_with_failing_hsop() {
    let (code, doc) = check_doc("2,3,3,8,12/1,1,4,4,6", &[]);
    assert_eq!(code, 0);
    assert_eq!(doc.nonnegative, Verdict::True);
    assert!(doc.certificates.iter().any(|c| c.kind() == CertificateKind::HsopFails));
    doc.verify(DEFAULT_DEGREE_CAP).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "105,3,5,7/35,21,15,1"]).0, 1);
    assert_eq!(run(&["check", "4,6/2,5"]).0, 2);
    assert_eq!(run(&["check", "0,2/1"]).0, 3);
    assert_eq!(run(&["check"]).0, 3);
    assert_eq!(run(&["frobrenius", "3,5"]).0, 3);
    assert_eq!(run(&["--degree-cap", "10", "check", "100/1"]).0, 4);
    assert_eq!(run(&["--degree-cap", "10", "expand", "100/1"]).0, 4);
    assert_eq!(run(&["hsop", "3,5,14/2,3,7"]).0, 1);
    assert_eq!(run(&["hsop", "25,30/2,3"]).0, 0);
    assert_eq!(run(&["hsop", "3/2,2"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn parse_error_names_the_column() {
    let (code, _, err) = run(&["expand", "3, x4/1"]);
    assert_eq!(code, 3);
    assert!(err.contains("column 4"), "{err}");
}

#[test]
fn expand_and_frobenius_text() {
    assert_eq!(run(&["expand", "3,4/1,2"]), (0, "1,1,2,1,1\n".into(), String::new()));
    let (code, out, _) = run(&["frobenius", "3,5"]);
    assert_eq!(code, 0);
    assert!(out.contains("frobenius: 7\n"));
    assert!(out.contains("apery: 0,10,5\n"));
    assert!(out.contains("selmer bound: 7\n"));
    let (_, out, _) = run(&["frobenius", "4,6", "--contains", "10,11"]);
    assert!(out.contains("frobenius: none (gcd 2)"));
    assert!(out.contains("contains 10: true") && out.contains("contains 11: false"));
}

#[test]
fn cyclotomic_and_polya() {
    let (_, out, _) = run(&["--json", "cyclotomic", "105"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["min_coefficient"], "-2");
    assert_eq!(v["degree"], 48);
    assert_eq!(run(&["polya", "6,1/2,3"]).1, "k = 1\n");
    assert_eq!(run(&["--polya-kmax", "5", "polya", "105,3,5,7/35,21,15,1"]).0, 2);
}

#[test]
fn cgf_form_inputs() {
    assert_eq!(run(&["cgf-form", "7,8,9/1,2,3"]).1, "alpha: 1\nbeta: 0\nindices: 4,7,8,9\n");
    assert_eq!(run(&["cgf-form", "0,2,4,2"]).1, "alpha: 2\nbeta: 1\nindices: 2,2\n");
    assert_eq!(run(&["cgf-form", "1,1,2"]).0, 2);
    assert_eq!(run(&["cgf-form", "1,x"]).0, 3);
}

#[test]
fn report_round_trip_with_coefficients() {
    let (_, doc) = check_doc("255,256,257/15,16,17", &["--coefficients"]);
    doc.verify(DEFAULT_DEGREE_CAP).unwrap();
    let text = serde_json::to_string(&doc).unwrap();
    assert_eq!(serde_json::from_str::<ReportDocument>(&text).unwrap(), doc);
    assert!(doc.coefficients.is_some());
}

#[test]
fn report_rejects_unknown_fields_and_tampering() {
    let (_, out, _) = run(&["check", "60,66,72/10,11,12"]);
    let mut v: serde_json::Value = serde_json::from_str(&out).unwrap();
    v["extra"] = serde_json::json!(1);
    assert!(serde_json::from_value::<ReportDocument>(v.clone()).is_err());
    v.as_object_mut().unwrap().remove("extra");
    v["nonnegative"] = serde_json::json!("false");
    let doc: ReportDocument = serde_json::from_value(v.clone()).unwrap();
    assert!(doc.verify(DEFAULT_DEGREE_CAP).is_err());
    v["nonnegative"] = serde_json::json!("true");
    v["delta"] = serde_json::json!([6]);
    let doc: ReportDocument = serde_json::from_value(v).unwrap();
    assert!(doc.verify(DEFAULT_DEGREE_CAP).is_err());
}

#[test]
fn output_is_deterministic() {
    let a = run(&["check", "2,3,3,8,12/1,1,4,4,6", "--coefficients"]);
    let b = run(&["check", "2,3,3,8,12/1,1,4,4,6", "--coefficients"]);
    assert_eq!(a, b);
    let (_, out, _) = run(&["check", "6/2,3", "--timings"]);
    assert!(serde_json::from_str::<ReportDocument>(&out).unwrap().timings.is_some());
}

#[test]
fn environment_caps_yield_to_flags() {
    let bin = env!("CARGO_BIN_EXE_cgf");
    let status = Command::new(bin).args(["expand", "100/1"]).env("CGF_DEGREE_CAP", "10").status().unwrap();
    assert_eq!(status.code(), Some(4));
    let status = Command::new(bin)
        .args(["--degree-cap", "1000", "expand", "100/1"])
        .env("CGF_DEGREE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
}

fn scan_lines(path: &PathBuf) -> Vec<ScanRecord> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn scan_resumes_after_interruption() {
    let full = scratch("full.jsonl");
    let args = ["scan-stanton", "--n-max", "2", "--m-max", "6", "--a-max", "2", "--out"];
    let mut full_args = args.to_vec();
    full_args.push(full.to_str().unwrap());
    let (code, summary, _) = run(&full_args);
    assert_eq!(code, 0, "{summary}");
    let complete = fs::read_to_string(&full).unwrap();

    let partial = scratch("partial.jsonl");
    let lines: Vec<&str> = complete.lines().collect();
    let head = lines[..lines.len() / 2].join("\n");
    let torn = &lines[lines.len() / 2][..10];
    fs::write(&partial, format!("{head}\n{torn}")).unwrap();
    let mut part_args = args.to_vec();
    part_args.extend([partial.to_str().unwrap(), "--jobs", "3"]);
    let (code, summary2, _) = run(&part_args);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(&partial).unwrap(), complete);
    assert_eq!(summary, summary2);

    // A second run over a finished file adds nothing.
    run(&part_args);
    assert_eq!(scan_lines(&partial).len(), lines.len());
}

#[test]
fn scan_output_independent_of_jobs() {
    let (_, one, _) = run(&["scan-gk", "--n-max", "14", "--jobs", "1"]);
    let (_, four, _) = run(&["scan-gk", "--n-max", "14", "--jobs", "4"]);
    assert_eq!(one, four);
    let last: serde_json::Value = serde_json::from_str(one.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["violations"], serde_json::json!([]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spec_text_round_trips(a in prop::collection::vec(1u64..1000, 0..6), b in prop::collection::vec(1u64..1000, 0..6)) {
        let spec = cgf_core::polyq::QuotientSpec::new(a, b).unwrap();
        prop_assert_eq!(parse_spec(&render_spec(&spec)).unwrap(), spec);
    }

    #[test]
    fn every_report_reverifies(a in prop::collection::vec(1u64..=24, 1..5), b in prop::collection::vec(1u64..=12, 0..5)) {
        let spec = cgf_core::polyq::QuotientSpec::new(a, b).unwrap();
        let text = render_spec(&spec);
        let (_, doc) = check_doc(&text, &["--coefficients"]);
        prop_assert!(doc.verify(DEFAULT_DEGREE_CAP).is_ok());
    }
}
