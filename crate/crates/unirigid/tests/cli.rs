//! End-to-end checks of the command-line interface: exit codes per verdict
//! class, report determinism, file-format errors, and the transform round
//! trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_unirigid")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn analyze_ladder_is_dimensionally_rigid_only() {
    let out = run(&["analyze", fixture("ladder.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 10, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ranks"], serde_json::json!([2, 1]));
    assert_eq!(report["rank_sum"], 3);
    assert_eq!(report["dimensionally_rigid"], "yes");
    assert_eq!(report["universally_rigid"], "no");
}

#[test]
fn analyze_triangle_is_universally_rigid() {
    let out = run(&["analyze", fixture("triangle.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ranks"], serde_json::json!([]));
}

#[test]
fn analyze_square_cycle_is_refuted() {
    let out = run(&["analyze", fixture("square_4cycle.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 20);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["max_affine_dim"], 3);
    assert_eq!(report["dimensionally_rigid"], "no");
}

#[test]
fn analyze_four_pole_ranks() {
    let out = run(&["analyze", fixture("four_pole.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 10);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ranks"], serde_json::json!([4, 4, 1]));
}

#[test]
fn analyze_hidden_stress_is_inconclusive() {
    let out = run(&["analyze", fixture("hidden_stress.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 30);
}

#[test]
fn analyze_exact_mode_gives_up_on_the_ladder() {
    let out = run(&[
        "analyze",
        fixture("ladder.json").to_str().unwrap(),
        "--mode",
        "exact1d",
    ]);
    assert_eq!(exit_code(&out), 30);
}

#[test]
fn analyze_user_mode_follows_supplied_stresses() {
    let out = run(&[
        "analyze",
        fixture("ladder.json").to_str().unwrap(),
        "--mode",
        "user",
        "--stresses",
        fixture("ladder.cert.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 10);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ranks"], serde_json::json!([2, 1]));
}

#[test]
fn analyze_user_mode_rejects_bad_stresses_with_exit_20() {
    let dir = tempfile::tempdir().unwrap();
    // level-2 stress offered at level 1: not in equilibrium there
    let bad = dir.path().join("bad.cert.json");
    std::fs::write(
        &bad,
        r#"{"levels":[{"stress":[{"i":1,"j":4,"w":1.0},{"i":2,"j":3,"w":1.0},{"i":5,"j":6,"w":-2.0}]}]}"#,
    )
    .unwrap();
    let out = run(&[
        "analyze",
        fixture("ladder.json").to_str().unwrap(),
        "--mode",
        "user",
        "--stresses",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 20);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("restricted equilibrium"), "stderr: {stderr}");
}

#[test]
fn analyze_writes_report_and_certificate_alongside() {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("ladder.json");
    let out = run(&[
        "analyze",
        fixture("ladder.json").to_str().unwrap(),
        "--json-out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 10);
    assert!(report_path.exists());
    let cert_path = dir.path().join("ladder.cert.json");
    assert!(cert_path.exists());
    // the emitted certificate verifies through the CLI
    let out = run(&[
        "verify",
        fixture("ladder.json").to_str().unwrap(),
        cert_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 10);
}

#[test]
fn analyze_reports_are_reproducible() {
    let path = fixture("four_pole.json");
    let args = ["analyze", "--seed", "7", path.to_str().unwrap()];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(exit_code(&a), exit_code(&b));
}

#[test]
fn verify_ladder_certificate() {
    let out = run(&[
        "verify",
        fixture("ladder.json").to_str().unwrap(),
        fixture("ladder.cert.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 10);
}

#[test]
fn verify_ladder_certificate_on_strengthened_framework() {
    // the same certificate file applies to the framework with the extra bar
    let out = run(&[
        "verify",
        fixture("ladder_plus_diagonal.json").to_str().unwrap(),
        fixture("ladder.cert.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn verify_tampered_certificate_reports_nsd() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("ladder.cert.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    // negate every level-1 entry
    for entry in doc["levels"][0]["stress"].as_array_mut().unwrap() {
        let w = entry["w"].as_f64().unwrap();
        entry["w"] = serde_json::json!(-w);
    }
    doc.as_object_mut().unwrap().remove("declared_ranks");
    let tampered = dir.path().join("tampered.cert.json");
    std::fs::write(&tampered, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&[
        "verify",
        fixture("ladder.json").to_str().unwrap(),
        tampered.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 20);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["failure"], "NSD at level 1");
}

#[test]
fn verify_one_pole_certificates() {
    let out = run(&[
        "verify",
        fixture("one_pole.json").to_str().unwrap(),
        fixture("one_pole_dimensional.cert.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 10);
    let out = run(&[
        "verify",
        fixture("one_pole.json").to_str().unwrap(),
        fixture("one_pole_universal.cert.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn verify_can_embed_restricted_matrices() {
    let out = run(&[
        "verify",
        fixture("ladder.json").to_str().unwrap(),
        fixture("ladder.cert.json").to_str().unwrap(),
        "--embed-matrices",
    ]);
    assert_eq!(exit_code(&out), 10);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let m2 = report["levels"][1]["restricted_matrix"].as_array().unwrap();
    assert_eq!(m2.len(), 4);
    // the rank-1 sign pattern, scaled by the midpoint parametrization
    let expect = [0.5, -0.5, 0.5, -0.5];
    for (v, e) in m2[0].as_array().unwrap().iter().zip(expect) {
        assert!((v.as_f64().unwrap() - e).abs() < 1e-12);
    }
}

#[test]
fn conic_subcommand_prints_the_form_or_none() {
    let out = run(&["conic", fixture("ladder.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim(), "[[0.0,1.0],[1.0,0.0]]");

    let out = run(&["conic", fixture("triangle.json").to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "none");
}

#[test]
fn stress_space_subcommand_prints_dimension() {
    let out = run(&["stress-space", fixture("k4_square.json").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("dimension: 1"), "got: {text}");

    let out = run(&["stress-space", fixture("hidden_stress.json").to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("dimension: 3"), "got: {text}");
}

#[test]
fn transform_identity_reproduces_the_framework() {
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("identity.json");
    std::fs::write(&map_path, "[[1,0,0],[0,1,0],[0,0,1]]").unwrap();
    let out_fw = dir.path().join("out.json");
    let out_cert = dir.path().join("out.cert.json");
    let out = run(&[
        "transform",
        fixture("ladder.json").to_str().unwrap(),
        fixture("ladder.cert.json").to_str().unwrap(),
        map_path.to_str().unwrap(),
        "--out-framework",
        out_fw.to_str().unwrap(),
        "--out-certificate",
        out_cert.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let original = std::fs::read_to_string(fixture("ladder.json")).unwrap();
    let transformed = std::fs::read_to_string(&out_fw).unwrap();
    assert_eq!(original, transformed);
}

#[test]
fn transform_orchard_map_output_still_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out_fw = dir.path().join("orchard.json");
    let out_cert = dir.path().join("orchard.cert.json");
    let out = run(&[
        "transform",
        fixture("ladder.json").to_str().unwrap(),
        fixture("ladder.cert.json").to_str().unwrap(),
        fixture("orchard_map.json").to_str().unwrap(),
        "--out-framework",
        out_fw.to_str().unwrap(),
        "--out-certificate",
        out_cert.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    // dimensional rigidity carries over; the converging poles add member
    // directions, so the image is even universally rigid
    let out = run(&["verify", out_fw.to_str().unwrap(), out_cert.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["dimensionally_rigid"], "yes");
    assert_eq!(report["ranks"], serde_json::json!([2, 1]));
}

#[test]
fn transform_with_vertex_on_hyperplane_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("bad.json");
    // x + y = 1 passes through vertex 1 of the ladder
    std::fs::write(&map_path, "[[1,0,0],[0,1,0],[1,1,-1]]").unwrap();
    let out = run(&[
        "transform",
        fixture("ladder.json").to_str().unwrap(),
        fixture("ladder.cert.json").to_str().unwrap(),
        map_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"dim\": 2, \"vertices\": [[0, 0],").unwrap();
    let out = run(&["analyze", broken.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line"), "stderr: {stderr}");

    let dup = dir.path().join("dup.json");
    std::fs::write(
        &dup,
        r#"{"dim":2,"vertices":[[0,0],[1,0]],"members":[{"i":1,"j":2},{"i":2,"j":1}]}"#,
    )
    .unwrap();
    let out = run(&["analyze", dup.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn analyze_refine_certifies_the_hidden_stress_framework() {
    let out = run(&[
        "analyze",
        fixture("hidden_stress.json").to_str().unwrap(),
        "--refine",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["rank_sum"], 6);
    assert_eq!(report["universally_rigid"], "yes");
}
