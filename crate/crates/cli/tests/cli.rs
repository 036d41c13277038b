use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley-bruhat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

const S2_PAYLOAD: &str = r#"{"Z":[[[0.5,0]]]}"#;

#[test]
fn d_on_the_sphere() {
    let o = run(&["d", "--family", "AIII", "--m", "1", "--n", "1", "--payload", S2_PAYLOAD, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let entries = v["entries"].as_array().unwrap();
    assert!((entries[0][0].as_f64().unwrap() - 0.6).abs() < 1e-15);
    assert!((entries[1][0].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-15);
    assert_eq!(v["method"], "cayley_det");

    let o = run(&["d", "--family", "AIII", "--m", "1", "--n", "1", "--payload", S2_PAYLOAD]);
    let text = stdout(&o);
    assert!(text.contains("d[1] = 0.6\n") && text.contains("d[2] = 1.66666666667\n"), "{text}");
}

#[test]
fn every_method_agrees() {
    let o = run(&["d", "--family", "CII", "--p", "1", "--q", "2", "--seed", "3", "--method", "all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 5);
    let first = &reports[0]["entries"];
    for r in reports {
        for (a, b) in r["entries"].as_array().unwrap().iter().zip(first.as_array().unwrap()) {
            assert!((a[0].as_f64().unwrap() - b[0].as_f64().unwrap()).abs() < 1e-10);
            assert!((a[1].as_f64().unwrap() - b[1].as_f64().unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn enumerate_sphere() {
    let o = run(&["enumerate", "--family", "AIII", "--m", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "++\n--\n");
}

#[test]
fn enumerate_with_limits() {
    let o = run(&["enumerate", "--family", "BDI", "--p", "3", "--q", "3", "--check-limits", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["count"], 2);
    for c in v["components"].as_array().unwrap() {
        assert_eq!(c["limit"]["converged"], true);
    }
}

#[test]
fn golden_suites() {
    let o = run(&["golden", "--suite", "rp6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("rp6 PASS"));
    let o = run(&["golden", "--suite", "hp1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["golden", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_defaults_pass() {
    let o = run(&["verify", "--samples", "10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["cases"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_rep_passes() {
    let o = run(&["verify-rep", "--n", "5", "--samples", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["fixed_rank"], 10);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["verify", "--family", "DIII", "--n", "3", "--samples", "5", "--seed", "11", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["build", "--family", "BDI_oddodd", "--p", "3", "--q", "3", "--seed", "4", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn build_document_round_trips_through_payload() {
    let o = run(&["build", "--family", "CI", "--n", "2", "--seed", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let mut doc = json(&o);
    let x = doc["X"].clone();
    doc.as_object_mut().unwrap().retain(|k, _| k == "family" || k == "params" || k == "payload");
    let path = std::env::temp_dir().join(format!("cb-doc-{}.json", std::process::id()));
    std::fs::write(&path, doc.to_string()).unwrap();
    let arg = format!("@{}", path.display());
    let again = run(&["build", "--payload", &arg, "--format", "json"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again)["X"], x);
}

#[test]
fn non_generic_point_is_a_check_failure() {
    let payload = r#"{"Z":[[[1,0]]]}"#;
    let o = run(&["d", "--family", "AIII", "--m", "1", "--n", "1", "--payload", payload, "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "non_generic");
    assert_eq!(v["error"]["k"], 1);
    let o = run(&["factorize", "--family", "AIII", "--m", "1", "--n", "1", "--payload", payload]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn factorize_explicit_matrix() {
    let m = r#"{"n":2,"entries":[[[2,0],[1,0]],[[4,0],[5,0]]]}"#;
    let o = run(&["factorize", "--matrix", m, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["D"]["entries"][0][0], serde_json::json!([2.0, 0.0]));
    assert_eq!(v["D"]["entries"][1][1], serde_json::json!([3.0, 0.0]));
}

#[test]
fn usage_errors_name_the_problem() {
    let o = run(&["d", "--family", "XYZ"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("XYZ"));

    let o = run(&["d", "--family", "AIII", "--m", "1", "--n", "2", "--payload", S2_PAYLOAD]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains('Z'));

    let o = run(&["d", "--family", "AIII", "--m", "1", "--n", "1", "--payload", "{"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));

    let o = run(&["d", "--family", "AIII", "--m", "1"]);
    assert_eq!(o.status.code(), Some(1));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
