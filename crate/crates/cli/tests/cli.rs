//! End-to-end checks of the binary: exit codes, config handling, artifact
//! shape.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zetalab"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zetalab_cli_{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn missing_zero_table_is_machine_readable() {
    let dir = temp_dir("missing_zeros");
    let out = bin().args(["detect", "--out-dir"]).arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let msg = v["error"].as_str().unwrap();
    assert!(msg.contains("--zeros"), "error message: {msg}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = temp_dir("bad_config");
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"t_horizon": 100.0, "tee_horizon": 5}"#).unwrap();
    let out = bin()
        .args(["scan-r", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("tee_horizon"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn flags_override_config_file() {
    let dir = temp_dir("override");
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, r#"{"t_horizon": 300.0, "dt": 0.5, "sigma": 1.5, "eta": 0.5}"#).unwrap();
    // flag eta wins over the file value; with file eta = 0.5 the set is empty
    let out = bin()
        .args(["scan-r", "--config"])
        .arg(&cfg)
        .args(["--eta", "0.01", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("scan_r.json")).unwrap()).unwrap();
    assert_eq!(summary["eta"].as_f64().unwrap(), 0.01);
    assert!(summary["config_hash"].is_string());
    assert!(summary["manifest_hash"].is_string());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn csv_artifacts_carry_the_hash_record() {
    let dir = temp_dir("csv_hash");
    let out = bin()
        .args(["scan-theorem-lhs", "--t-horizon", "200", "--dt", "0.5", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.join("scan_theorem_lhs.csv")).unwrap();
    let mut lines = csv.lines();
    let first = lines.next().unwrap();
    assert!(first.starts_with("#config_hash="));
    assert!(first.contains("manifest_hash="));
    assert_eq!(lines.next().unwrap(), "t_lo,t_hi");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn find_zeros_then_detect_roundtrip() {
    let dir = temp_dir("detect_roundtrip");
    let zeros = dir.join("zeros.txt");
    let out = bin()
        .args(["find-zeros", "--t-max", "120", "--out"])
        .arg(&zeros)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let out = bin()
        .args(["detect", "--t-horizon", "10000", "--u-scale", "55", "--zeros"])
        .arg(&zeros)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("detect.json")).unwrap()).unwrap();
    assert!(summary["total"].as_u64().unwrap() >= 8);
    assert_eq!(summary["failures"].as_array().unwrap().len(), 0);
    // witness CSV header shape
    let csv = std::fs::read_to_string(dir.join("witnesses.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("gamma,tag,K,r,M,M_prime,value,threshold"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn exponents_profile_file() {
    let dir = temp_dir("profile_file");
    let profile = dir.join("profile.txt");
    std::fs::write(&profile, "0.5 1\n0.75 0.4\n1 0\n").unwrap();
    let out = bin()
        .args(["exponents", "--nu", "0.3", "--eps", "0.01", "--profile-file"])
        .arg(&profile)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("exponent"), "{text}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_lemma_unknown_id() {
    let dir = temp_dir("unknown_lemma");
    let out = bin()
        .args(["verify-lemma", "99.9", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn calibrate_reproduces_frozen_constants() {
    let dir = temp_dir("calibrate");
    let out = bin()
        .args(["calibrate", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(
        String::from_utf8_lossy(&out.stdout).contains("reproduces frozen constants: true"),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    // the written manifest loads back and hashes clean
    let m = zetalab::calib::CalibrationManifest::load(&dir.join("calibration.txt")).unwrap();
    assert_eq!(m, zetalab::calib::CalibrationManifest::frozen());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_lemma_41_passes() {
    let dir = temp_dir("lemma41");
    let out = bin()
        .args(["verify-lemma", "4.1", "--out-dir"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("lemma_4_1.json")).unwrap())
            .unwrap();
    assert_eq!(summary["samples"].as_u64().unwrap(), 10_000);
    assert!(summary["worst_ratio"].as_f64().unwrap() <= 1.0);
    let _ = std::fs::remove_dir_all(&dir);
}
