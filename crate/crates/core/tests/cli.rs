//! End-to-end tests of the `cubic` binary: exit-code contract, output
//! formats, certificate round-trips, and usage-error handling.

use std::path::PathBuf;
use std::process::{Command, Output};

use cubic_core::congruence::CongruenceCertificate;

fn cubic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cubic-cli-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

#[test]
fn compute_single_value() {
    let out = cubic(&["compute", "--k", "2", "--n", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("12"));

    let out = cubic(&["compute", "--k", "2", "--n", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().last().unwrap().trim().ends_with('1'));
}

#[test]
fn compute_all_methods_agree() {
    let out = cubic(&["compute", "--k", "2", "--range", "0..5", "--all-methods"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("AGREE").count(), 6);
    assert!(!text.contains("DISAGREE"));
}

#[test]
fn compute_json_mode() {
    let out = cubic(&["--json", "compute", "--k", "3", "--n", "10"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(v["k"], 3);
    assert_eq!(v["agree"], true);
}

#[test]
fn compute_usage_errors() {
    // neither --n nor --range
    let out = cubic(&["compute", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown flag is an error, not a warning
    let out = cubic(&["compute", "--k", "2", "--n", "1", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_preset_writes_passing_certificates() {
    let dir = temp_dir("preset");
    let out = cubic(&[
        "verify",
        "--preset",
        "theorem-2.1",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    for t in [62u64, 161] {
        let path = dir.join(format!("certificate-p2-mod11-m297-t{t}.json"));
        let cert = CongruenceCertificate::from_json(&std::fs::read_to_string(&path).unwrap())
            .expect("certificate parses");
        assert!(cert.all_zero);
        assert_eq!(cert.verified_through, 300);
        let ev = cert
            .pipeline_evidence
            .expect("preset claims carry evidence");
        assert_eq!(ev.floor_v, 88);
        assert_eq!(ev.orbit, vec![t]);
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_flags_pass_and_fail() {
    let dir = temp_dir("flags");
    let ok_path = dir.join("mod3.json");
    let out = cubic(&[
        "verify",
        "--family",
        "p2",
        "--mod",
        "3",
        "--m",
        "3",
        "--t",
        "2",
        "--depth",
        "1000",
        "--out",
        ok_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));

    // structured mode: one JSON array of certificates on stdout
    let out = cubic(&[
        "--json",
        "verify",
        "--family",
        "p2",
        "--mod",
        "3",
        "--m",
        "3",
        "--t",
        "2",
        "--depth",
        "50",
        "--out",
        dir.join("mod3-json.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let certs: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(certs.len(), 1);
    assert_eq!(certs[0]["all_zero"], true);

    let bad_path = dir.join("t63.json");
    let out = cubic(&[
        "verify",
        "--family",
        "p2",
        "--mod",
        "11",
        "--m",
        "297",
        "--t",
        "63",
        "--depth",
        "88",
        "--out",
        bad_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL"));
    assert!(text.contains("first failure"));
    let cert =
        CongruenceCertificate::from_json(&std::fs::read_to_string(&bad_path).unwrap()).unwrap();
    assert!(!cert.all_zero);
    assert!(!cert.failures.is_empty());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_certificate_round_trip_matches_fingerprint() {
    let dir = temp_dir("roundtrip");
    let first = dir.join("first.json");
    let out = cubic(&[
        "verify",
        "--family",
        "p2",
        "--mod",
        "3",
        "--m",
        "3",
        "--t",
        "2",
        "--depth",
        "250",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let first_text = std::fs::read_to_string(&first).unwrap();
    let cert = CongruenceCertificate::from_json(&first_text).unwrap();

    // feed the emitted claim back in as a claim file
    let claim_path = dir.join("claim.json");
    std::fs::write(&claim_path, serde_json::to_string(&cert.claim).unwrap()).unwrap();
    let second = dir.join("second.json");
    let out = cubic(&[
        "verify",
        "--claim-file",
        claim_path.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let second_text = std::fs::read_to_string(&second).unwrap();
    assert_eq!(
        first_text, second_text,
        "re-verification must byte-reproduce the certificate"
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_usage_errors() {
    // malformed claim file gets the usage exit code, distinct from failure
    let dir = temp_dir("badclaim");
    let path = dir.join("claim.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = cubic(&["verify", "--claim-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = cubic(&["verify", "--preset", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));

    let out = cubic(&["verify", "--family", "p2", "--mod", "3", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));

    // depth guard: the residue index would exceed 10^6
    let out = cubic(&[
        "verify", "--family", "p2", "--mod", "3", "--m", "297", "--t", "2", "--depth", "100000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--force-depth"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn bound_reports_certified_values() {
    let out = cubic(&[
        "bound",
        "--m",
        "297",
        "--M",
        "22",
        "--N",
        "66",
        "--t",
        "62",
        "--r",
        "1:10,2:-1,11:-1,22:0",
        "--r-prime",
        "1:4,2:2,22:1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("orbit    {62}"));
    assert!(text.contains("v        2125/24"));
    assert!(text.contains("floor(v) 88"));
    assert!(text.contains("hypotheses pass"));
}

#[test]
fn bound_json_mode() {
    let out = cubic(&[
        "--json",
        "bound",
        "--m",
        "297",
        "--M",
        "22",
        "--N",
        "66",
        "--t",
        "161",
        "--r",
        "1:10,2:-1,11:-1",
        "--r-prime",
        "1:4,2:2,22:1",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["floor_v"], 88);
    assert_eq!(v["v"], "2117/24");
    assert_eq!(v["orbit"], serde_json::json!([161]));
    assert_eq!(v["hypotheses"]["pass"], true);
    assert_eq!(v["hypotheses"]["rows"].as_array().unwrap().len(), 8);
}

#[test]
fn bound_rejects_bad_divisor_structure() {
    let out = cubic(&[
        "bound",
        "--m",
        "297",
        "--M",
        "22",
        "--N",
        "66",
        "--t",
        "62",
        "--r",
        "3:1",
        "--r-prime",
        "1:4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("does not divide"));
}

#[test]
fn bound_degenerate_tuple() {
    let out = cubic(&[
        "bound",
        "--m",
        "1",
        "--M",
        "1",
        "--N",
        "1",
        "--t",
        "0",
        "--r",
        "1:0",
        "--r-prime",
        "",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("v        0"));
    assert!(text.contains("floor(v) 0"));
}

#[test]
fn split_subcommand() {
    let out = cubic(&["split", "--n", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("6A + 3B         3"));
    assert!(text.contains("i=j=k solutions: 0"));

    let out = cubic(&["split", "--n", "1"]);
    assert!(stdout(&out).contains("6A + 3B         12"));

    let out = cubic(&["--json", "split", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["equal_triple_solutions"], 0);
    assert_eq!(v["six_a_plus_three_b"], v["p2"]);
}

#[test]
fn scan_subcommand() {
    let out = cubic(&[
        "scan", "--family", "p2", "--mod", "3", "--m", "3", "--depth", "300",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("EMPIRICAL — no proof status"));
    assert!(text.contains("{2}"));

    let out = cubic(&[
        "--json", "scan", "--family", "p2", "--mod", "2", "--m", "1", "--depth", "10",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["survivors"], serde_json::json!([]));
    assert_eq!(v["empirical"], true);
}

#[test]
fn scan_mod11_contains_both_residues() {
    let out = cubic(&[
        "--json", "scan", "--family", "p2", "--mod", "11", "--m", "297", "--depth", "88",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let survivors: Vec<u64> = v["survivors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert!(survivors.contains(&62));
    assert!(survivors.contains(&161));
}
