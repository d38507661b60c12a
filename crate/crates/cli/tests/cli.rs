//! End-to-end tests of the binary: every command line shown in the README is
//! exercised here, plus exit-code and determinism checks.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn kappa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn kappa_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kappa"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary finishes")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json on stdout")
}

#[test]
fn build_then_invariants_round_trip() {
    let built = kappa(&["build", "rp2"]);
    assert!(built.status.success());
    let inv = kappa_with_stdin(&["invariants"], &String::from_utf8_lossy(&built.stdout));
    let v = stdout_json(&inv);
    assert_eq!(v["s0"], 6);
    assert_eq!(v["s1"], 15);
    assert_eq!(v["s2"], 10);
    assert_eq!(v["euler"], 1);
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0]));
    assert_eq!(v["torsion"], serde_json::json!([2]));
}

#[test]
fn build_cyclic_four_has_marks_and_bounded_size() {
    let out = kappa(&["build", "cyclic:4", "--format", "json"]);
    let v = stdout_json(&out);
    let s2 = v["triangles"].as_array().unwrap().len();
    assert!(s2 <= 26, "s2 = {s2}");
    assert!(v["marks"]["vertices"].get("P").is_some());
    assert!(v["marks"]["loops"].get("alpha").is_some());
}

#[test]
fn bounds_finite_abelian() {
    let out = kappa(&["bounds", "--group", "finite_abelian:2,4"]);
    let v = stdout_json(&out);
    assert!(v["kappa"]["hi"].as_u64().unwrap() <= 62);
    assert_eq!(v["kappa"]["lo_reason"], "torsion");
    assert_eq!(v["sigma"]["lo_reason"], "universal_pi_16");
}

#[test]
fn bounds_free_group_is_zero() {
    let v = stdout_json(&kappa(&["bounds", "--group", "free:3"]));
    assert_eq!(v["kappa"]["hi"], 0);
    assert_eq!(v["kappa"]["exact"], 0);
}

#[test]
fn census_small_is_empty_and_deterministic() {
    let a = kappa(&["census", "--max-T", "6"]);
    assert!(a.status.success());
    assert!(a.stdout.is_empty(), "T <= 6 census has no classes");
    let b = kappa(&["census", "--max-T", "8", "--workers", "1"]);
    let c = kappa(&["census", "--max-T", "8", "--workers", "3"]);
    assert!(!b.stdout.is_empty());
    assert_eq!(b.stdout, c.stdout, "byte-identical across worker counts");
    let again = kappa(&["census", "--max-T", "8", "--workers", "1"]);
    assert_eq!(b.stdout, again.stdout, "byte-identical across runs");
}

#[test]
fn census_budget_produces_incomplete_trailer() {
    let out = kappa(&["census", "--max-T", "8", "--budget-nodes", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"incomplete\":true"));
}

#[test]
fn census_above_ten_needs_opt_in() {
    let out = kappa(&["census", "--max-T", "11"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_decode_round_trip() {
    let built = kappa(&["build", "torus"]);
    let complex_json = String::from_utf8_lossy(&built.stdout).to_string();
    let encoded = kappa_with_stdin(&["encode"], &complex_json);
    let v = stdout_json(&encoded);
    assert_eq!(v["black"], 7);
    assert_eq!(v["green"], 21);
    assert_eq!(v["red"], 14);
    assert_eq!(v["properties_at_own_size"]["p1"], true);

    let decoded = kappa_with_stdin(&["decode"], &serde_json::to_string(&v).unwrap());
    let w = stdout_json(&decoded);
    // Same triangles as the torus we started from.
    let original: serde_json::Value = serde_json::from_str(&complex_json).unwrap();
    assert_eq!(w["triangles"], original["triangles"]);
}

#[test]
fn compile_cube_relator() {
    let out = kappa(&["compile", "--gens", "1", "--rel", "a1 a1 a1"]);
    let v = stdout_json(&out);
    assert_eq!(v["triangles"].as_array().unwrap().len(), 17);
}

#[test]
fn present_torus() {
    let built = kappa(&["build", "torus"]);
    let out = kappa_with_stdin(&["present"], &String::from_utf8_lossy(&built.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["abelianization"]["rank"], 2);
    assert_eq!(v["abelianization"]["torsion"], serde_json::json!([]));
}

#[test]
fn systole_of_rp2() {
    let built = kappa(&["build", "rp2"]);
    let out = kappa_with_stdin(
        &["systole", "--ring", "z2"],
        &String::from_utf8_lossy(&built.stdout),
    );
    let v = stdout_json(&out);
    assert_eq!(v["length"], "3");
    assert_eq!(v["witness_cycle"].as_array().unwrap().len(), 3);
}

#[test]
fn count_both_sides() {
    let v = stdout_json(&kappa(&["count", "10"]));
    assert_eq!(v["side"], "kappa");
    let expected = 60.0 * 10f64.log2();
    assert!((v["log2_simplified"].as_f64().unwrap() - expected).abs() < 1e-9);

    let v = stdout_json(&kappa(&["count", "2", "--sigma"]));
    assert_eq!(v["side"], "sigma");
    let lower: f64 = v["log2_lower"].as_str().unwrap().parse().unwrap();
    assert!((lower - 1.407_491_5).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kappa(&[]).status.code(), Some(2));
    assert_eq!(kappa(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kappa(&["build"]).status.code(), Some(2));
    assert_eq!(kappa(&["build", "rp2", "--bogus"]).status.code(), Some(2));
    assert_eq!(kappa(&["count", "ten"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one_with_record() {
    let bad = r#"{"vertex_count": 3, "triangles": [[0,1,2],[0,1,2]]}"#;
    let out = kappa_with_stdin(&["invariants"], bad);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("structured error record");
    assert_eq!(err["error"]["code"], "InvalidComplex");

    let out = kappa(&["build", "cyclic:1"]);
    assert_eq!(out.status.code(), Some(1));

    let disk = r#"{"vertex_count": 3, "triangles": [[0,1,2]]}"#;
    let out = kappa_with_stdin(&["systole"], disk);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "Systole");
}

#[test]
fn json_output_is_byte_deterministic() {
    for args in [
        vec!["build", "abelian:1:(2,4)"],
        vec!["bounds", "--group", "freeprod:(cyclic:2,cyclic:3)"],
        vec!["count", "100"],
    ] {
        let a = kappa(&args);
        let b = kappa(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn table_format_renders() {
    let out = kappa(&["bounds", "--group", "cyclic:3", "--format", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("kappa\t")));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("kappa-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rp2.json");
    let out = kappa(&["build", "rp2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let inv = kappa(&["invariants", "--in", path.to_str().unwrap()]);
    let v = stdout_json(&inv);
    assert_eq!(v["s2"], 10);
}

#[test]
fn census_seconds_budget_completes_small_runs() {
    let plain = kappa(&["census", "--max-T", "8"]);
    let budgeted = kappa(&["census", "--max-T", "8", "--budget-seconds", "3600"]);
    assert_eq!(plain.stdout, budgeted.stdout, "an unexhausted time budget changes nothing");
}
