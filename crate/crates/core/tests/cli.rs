use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn bigerm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigerm")).args(args).env_remove("BIGERM_TRUNC_CAP").output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn node_conductor() {
    let v = json(&bigerm(&["invariants", "--json", &data("node.bg")]));
    assert_eq!(v["conductor"], serde_json::json!([1, 1]));
    assert_eq!(v["intersection_multiplicity"], 1);
}

#[test]
fn cusp_pair_conductor() {
    let v = json(&bigerm(&["invariants", "--json", &data("cusps.bg")]));
    assert_eq!(v["conductor"], serde_json::json!([6, 6]));
    assert_eq!(v["gamma"]["conductor"], serde_json::json!([6, 6]));
    assert!(v["lambda"]["points"].as_array().is_some_and(|p| !p.is_empty()));
}

#[test]
fn malformed_input_exits_with_two() {
    let out = bigerm(&["normal-form", &data("malformed.bg")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn inline_literal_is_accepted() {
    let out = bigerm(&["normal-form", "branch1: x = t^3, y = t^4 + t^5 + t^7; branch2: x = t^5, y = t^2"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("case a"), "{text}");
    assert!(text.contains("(t1^3, t1^4 + t1^5)"), "{text}");
}

#[test]
fn normal_form_json_names_the_case() {
    let v = json(&bigerm(&["normal-form", "--json", &data("parallel_a3_b3.bg")]));
    assert_eq!(v["case"], "c'");
    assert_eq!(v["delta"], 2);
}

#[test]
fn equivalence_exit_codes() {
    let same = bigerm(&["equiv", &data("parallel_a3_b3.bg"), &data("parallel_a3_b1_3.bg")]);
    assert_eq!(same.status.code(), Some(0));
    let different = bigerm(&["equiv", &data("parallel_a3_b3.bg"), &data("parallel_a5.bg")]);
    assert_eq!(different.status.code(), Some(1));
    let broken = bigerm(&["equiv", &data("parallel_a3_b3.bg"), &data("malformed.bg")]);
    assert_eq!(broken.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["normal-form", "--json", "branch1: x = t^3, y = t^4 + 2*t^5; branch2: x = t^2, y = t^5"],
        vec!["table", "--json", "--pairs", "1,2", "--samples", "3"],
    ] {
        let a = bigerm(&args);
        let b = bigerm(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn table_rows_as_markdown() {
    let out = bigerm(&["table", "--pairs", "1,1", "--samples", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("(t1, 0) (0, t2)"), "{text}");
}

#[test]
fn truncation_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bigerm"))
        .args(["normal-form", &data("cusps.bg")])
        .env("BIGERM_TRUNC_CAP", "4")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("4"));
}

#[test]
fn quick_selftest_passes() {
    let out = bigerm(&["selftest", "--quick", "--json"]);
    let v = json(&out);
    let suites = v.as_array().expect("list of suites");
    assert!(suites.len() >= 8);
    assert!(suites.iter().all(|s| s["failures"].as_array().is_some_and(|f| f.is_empty())));
}
