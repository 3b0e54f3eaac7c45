use std::process::{Command, Output};

use serde_json::Value;

fn ncrs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncrs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn apply_prints_glued_seam_derivative() {
    let o = ncrs(&["apply", "ncrs-ricci", "K0", "f1 # f2", "g1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "f1 # d(f2*g1)\n");
}

#[test]
fn apply_accepts_leading_minus_and_formats() {
    let o = ncrs(&[
        "apply",
        "ncrs-poisson",
        "K0",
        "-f",
        "g",
        "--format",
        "latex",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "i\\,\\partial(f_{1} \\cdot g_{1})");
}

#[test]
fn verify_reports_one_line_per_check() {
    let o = ncrs(&["verify", "ncrs-poisson", "--max-order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text
        .lines()
        .take(4)
        .all(|l| l.starts_with("PASS ncrs-poisson redjac1")));
    assert!(text.ends_with("36 checks, 36 passed, 0 failed\n"));
}

#[test]
fn verify_output_is_deterministic() {
    let a = ncrs(&["verify", "ncrs-poisson-type-v1", "--max-order", "2"]);
    let b = ncrs(&["verify", "ncrs-poisson-type-v1", "--max-order", "2"]);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_reports_follow_the_schema() {
    let o = ncrs(&["verify", "ncrs-witt", "--orders", "1,1,1", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    for line in stdout(&o).lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "family",
                "identity",
                "mode",
                "orders",
                "pass",
                "residual_terms",
                "term_counts"
            ]
        );
        assert!(v["mode"]["commutative"].is_boolean() && v["mode"]["leibniz"].is_boolean());
        assert_eq!(
            v["pass"].as_bool().unwrap(),
            v["residual_terms"].as_array().unwrap().is_empty()
        );
    }
}

#[test]
fn leibniz_flag_implies_commutative() {
    let o = ncrs(&[
        "verify",
        "ncrs-ricci",
        "--orders",
        "1,1,1",
        "--leibniz",
        "--json",
    ]);
    let first: Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(first["mode"]["commutative"], true);
    assert_eq!(first["mode"]["leibniz"], true);
}

#[test]
fn limit_reports_sign_relation() {
    let o = ncrs(&["limit", "ncrs-ricci"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("K+(phi1, psi1) = phi1*psi1"));
    assert!(text.contains("K+ vs classical-ricci-a: opposite sign"));
}

#[test]
fn limit_verify_fails_for_poisson_type() {
    let o = ncrs(&["limit", "ncrs-poisson-type-v1", "--verify"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL limit(ncrs-poisson-type-v1, order-one) redjac2-minus"));
}

#[test]
fn trace_shows_each_summand() {
    let o = ncrs(&["trace", "ncrs-ricci", "redjac1", "--orders", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("K00(phi, psi) [2 terms]"));
    assert!(text.contains("sum [4 terms]"));
    assert!(text.contains("residual vanishes"));
}

#[test]
fn table_lists_slots() {
    let o = ncrs(&["table", "ncrs-ricci", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mappings"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_two_with_help() {
    let o = ncrs(&["verify"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = ncrs(&["apply", "ncrs-ricci", "K0", "f +", "g"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at byte"));
}
