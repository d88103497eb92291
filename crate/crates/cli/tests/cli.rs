//! Command-line contract: exit codes, strict config schema, artifact
//! shapes, and the bundled reference config staying in step with the
//! library's reference device.

use squidsim_core::params::DeviceParams;
use squidsim_core::spectrum::FluxGrid;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_squidsim")
}

fn reference_config() -> &'static str {
    concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/reference_device.json"
    )
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(exe())
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    let mut file = std::fs::File::create(&path).unwrap();
    file.write_all(body.as_bytes()).unwrap();
    path
}

/// Device block with one field overridable per test.
fn device_json(critical_current: &str, quality_factor: &str, temperature: &str) -> String {
    format!(
        r#"{{
    "device": {{
        "inductance": 6.5e-11,
        "capacitance": 7.4e-17,
        "critical_current": {critical_current},
        "beam_mass": 1.0e-16,
        "beam_frequency": 4.0212385965949354e9,
        "coupling_bl": 1.0e-6,
        "quality_factor": {quality_factor},
        "temperature": {temperature}
    }}
}}"#
    )
}

#[test]
fn missing_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["derive", "--config", "absent.json"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("error:"), "{stderr}");
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let body = device_json("1.0e-5", "1.0e4", "0.05").replace("\"device\"", "\"devize\"");
    let config = write_config(dir.path(), &body);
    let out = run_in(dir.path(), &["derive", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("devize"));
}

#[test]
fn bad_format_flag_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["report", "--config", reference_config(), "--format", "yaml"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("yaml"));
}

#[test]
fn zero_workers_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["derive", "--config", reference_config(), "--workers", "0"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn workers_env_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let bad = Command::new(exe())
        .args(["derive", "--config", reference_config()])
        .env("SQUIDSIM_WORKERS", "many")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8(bad.stderr).unwrap().contains("SQUIDSIM_WORKERS"));

    let good = Command::new(exe())
        .args(["derive", "--config", reference_config()])
        .env("SQUIDSIM_WORKERS", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(good.status.code(), Some(0));
}

#[test]
fn no_double_well_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // Sub-critical junction: beta_L < 1, the qubit reduction is undefined.
    let config = write_config(dir.path(), &device_json("1.0e-6", "1.0e4", "0.05"));
    let out = run_in(dir.path(), &["report", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("double-well"));
}

#[test]
fn derive_accepts_sub_critical_devices() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &device_json("1.0e-6", "1.0e4", "0.05"));
    let out = run_in(dir.path(), &["derive", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn zero_temperature_derive_reports_undefined_thermal_length() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &device_json("1.0e-5", "1.0e4", "0.0"));
    let out = run_in(dir.path(), &["derive", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("thermal_length = null"), "{stdout}");
    let artifact = std::fs::read_to_string(dir.path().join("out/derived.json")).unwrap();
    assert!(artifact.contains("\"thermal_length\": null"), "{artifact}");
}

#[test]
fn failed_cross_checks_exit_4_but_write_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let body = device_json("1.0e-5", "1.0e4", "0.05").replace(
        "\n}",
        ",\n    \"grid\": { \"phi_min\": -7.0685834705770345, \"phi_max\": 7.0685834705770345, \"points\": 601, \"levels\": 4 }\n}",
    );
    let config = write_config(dir.path(), &body);
    let out = run_in(dir.path(), &["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("richardson-convergence"));
    let artifact = std::fs::read_to_string(dir.path().join("out/validation.json")).unwrap();
    assert!(artifact.contains("\"pass\": false"), "{artifact}");
}

#[test]
fn sweep_without_sweep_block_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &device_json("1.0e-5", "1.0e4", "0.05"));
    let out = run_in(dir.path(), &["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("sweep"));
}

#[test]
fn low_quality_factor_is_infeasible_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &device_json("1.0e-5", "1.0e1", "0.05"));
    let out = run_in(dir.path(), &["report", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("feasible = false"), "{stdout}");
    let visibility_line = stdout
        .lines()
        .find(|l| l.contains("first-recoherence-visible"))
        .unwrap();
    assert!(visibility_line.contains("FAIL"), "{visibility_line}");
}

#[test]
fn reference_config_matches_bundled_device() {
    let text = std::fs::read_to_string(reference_config()).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let device = DeviceParams::reference();
    let expected = [
        ("inductance", device.inductance),
        ("capacitance", device.capacitance),
        ("critical_current", device.critical_current),
        ("beam_mass", device.beam_mass),
        ("beam_frequency", device.beam_frequency),
        ("coupling_bl", device.coupling_bl),
        ("quality_factor", device.quality_factor),
        ("temperature", device.temperature),
        ("bias", device.bias),
    ];
    for (key, value) in expected {
        assert_eq!(parsed["device"][key].as_f64().unwrap(), value, "{key}");
    }
    let grid = FluxGrid::default();
    assert_eq!(parsed["grid"]["phi_min"].as_f64().unwrap(), grid.phi_min);
    assert_eq!(parsed["grid"]["phi_max"].as_f64().unwrap(), grid.phi_max);
    assert_eq!(parsed["grid"]["points"].as_u64().unwrap() as usize, grid.points);
}

#[test]
fn json_format_emits_parseable_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "visibility",
            "--config",
            reference_config(),
            "--format",
            "json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/visibility.json")).unwrap())
            .unwrap();
    assert_eq!(table["columns"][0].as_str().unwrap(), "t_seconds");
    assert_eq!(table["columns"][6].as_str().unwrap(), "P_state");
    assert_eq!(table["rows"].as_array().unwrap().len(), 6000);
    let meta: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/visibility_meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["peaks"].as_array().unwrap().len(), 3);
    assert!(meta["recoherence_time"].as_f64().unwrap() > 0.0);
}

#[test]
fn csv_artifacts_use_lf_endings_and_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["spectrum", "--config", reference_config()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("out/eigenstates.csv")).unwrap();
    assert!(csv.starts_with("phi,u_over_U0,psi0,psi1,psi2\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().count(), 4502);
    let sweep = std::fs::read_to_string(dir.path().join("out/bias_sweep.csv")).unwrap();
    assert!(sweep.starts_with("bias,lambda0,lambda1\n"));
    assert_eq!(sweep.lines().count(), 42);
}
