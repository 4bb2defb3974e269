//! End-to-end tests of the `mpm` binary: verbs, exit codes, diagnostics and
//! the exported files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mpm"))
}

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn small_scenario(antenna_kind: &str, extra: &str) -> String {
    format!(
        r#"
name = "cli test"
frequency_ghz = 38.0
gamma = 5.0

[distance]
min_m = 20.0
max_m = 200.0
step_m = 20.0

[directional]
ple_n = 2.1

[antenna.tx]
kind = "{antenna_kind}"
hpbw_deg = 10.0

[antenna.rx]
kind = "{antenna_kind}"
hpbw_deg = 10.0

[pdp]
taps = [[0.0, 0.0], [40.0, -6.0], [110.0, -9.0]]

[numerics]
azimuth_bins = 1800
scatterers_per_ellipse = 120
{extra}
"#
    )
}

#[test]
fn run_writes_points_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["run", configs_dir().join("los_38ghz.toml").to_str().unwrap()],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(dir.path().join("points.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "d_m,pl_direct_db,correction_db,pl_omni_db");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 181);
    for row in &rows {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 4);
        let (pl_direct, correction, pl_omni) = (fields[1], fields[2], fields[3]);
        assert!(
            (pl_omni - (pl_direct + correction)).abs() < 1e-9,
            "row identity violated: {row}"
        );
        assert!(correction >= 0.0);
    }

    let summary = std::fs::read_to_string(dir.path().join("summary.toml")).unwrap();
    assert!(summary.contains("[omni_fit]"));
    assert!(summary.contains("[comparison]"), "reference block present in config");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("n_omni"));
}

#[test]
fn summary_reproduces_published_los_38_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["run", configs_dir().join("los_38ghz.toml").to_str().unwrap()],
    );
    assert!(out.status.success());
    let summary: toml::Value =
        toml::from_str(&std::fs::read_to_string(dir.path().join("summary.toml")).unwrap())
            .unwrap();
    let n_omni = summary["omni_fit"]["ple_n"].as_float().unwrap();
    assert!((n_omni - 1.8).abs() <= 0.3, "n_omni = {n_omni}");
    let reference_n = summary["comparison"]["reference_ple_n"].as_float().unwrap();
    assert_eq!(reference_n, 1.9);
    assert!(summary["comparison"]["mae_db"].as_float().unwrap() > 0.0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let config = configs_dir().join("nlos_73ghz.toml");
    assert!(run_in(dir_a.path(), &["run", config.to_str().unwrap()]).status.success());
    assert!(run_in(dir_b.path(), &["run", config.to_str().unwrap()]).status.success());
    let a = std::fs::read(dir_a.path().join("points.csv")).unwrap();
    let b = std::fs::read(dir_b.path().join("points.csv")).unwrap();
    assert_eq!(a, b, "points.csv must be deterministic");
    let a = std::fs::read(dir_a.path().join("summary.toml")).unwrap();
    let b = std::fs::read(dir_b.path().join("summary.toml")).unwrap();
    assert_eq!(a, b, "summary.toml must be deterministic");
}

#[test]
fn isotropic_antennas_zero_the_correction_column() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "iso.toml", &small_scenario("isotropic", ""));
    let out = run_in(dir.path(), &["run", config.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("points.csv")).unwrap();
    for row in csv.lines().skip(1) {
        let correction = row.split(',').nth(2).unwrap();
        assert_eq!(correction, "0.0000", "row: {row}");
    }
}

#[test]
fn check_accepts_bundled_configs() {
    for name in ["los_38ghz.toml", "nlos_38ghz.toml", "los_73ghz.toml", "nlos_73ghz.toml"] {
        let out = bin()
            .args(["check", configs_dir().join(name).to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}");
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok", "{name}");
    }
}

#[test]
fn check_reports_every_violation_with_its_key() {
    let dir = tempfile::tempdir().unwrap();
    let body = small_scenario("sinc", "").replace("hpbw_deg = 10.0\n\n[antenna.rx]", "hpbw_deg = -4.0\n\n[antenna.rx]")
        .replace("step_m = 20.0", "step_m = 7.0");
    let config = write_config(dir.path(), "bad.toml", &body);
    let out = bin().args(["check", config.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("antenna.tx.hpbw_deg"), "stdout: {stdout}");
    assert!(stdout.contains("distance"), "stdout: {stdout}");
}

#[test]
fn check_rejects_both_pdp_forms() {
    let dir = tempfile::tempdir().unwrap();
    let body = small_scenario(
        "sinc",
        "\n[pdp2]\n",
    )
    .replace(
        "[numerics]",
        "normalized_delays = [0.0, 1.0]\npowers_db = [0.0, -3.0]\nrms_delay_spread_ns = 50.0\n\n[numerics]",
    )
    .replace("\n[pdp2]\n", "");
    let config = write_config(dir.path(), "dual.toml", &body);
    let out = bin().args(["check", config.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("mutually exclusive"), "stdout: {stdout}");
}

#[test]
fn run_on_invalid_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let body = small_scenario("sinc", "").replace("min_m = 20.0", "min_m = -3.0");
    let config = write_config(dir.path(), "invalid.toml", &body);
    let out = run_in(dir.path(), &["run", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("distance.min_m"));
    assert!(!dir.path().join("points.csv").exists());
}

#[test]
fn missing_config_exits_one() {
    let out = bin().args(["run", "/nonexistent/config.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_requires_a_reference_block() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "noref.toml", &small_scenario("sinc", ""));
    let out = run_in(dir.path(), &["compare", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reference"));

    let with_ref = small_scenario("sinc", "") + "\n[reference]\nple_n = 2.0\n";
    let config = write_config(dir.path(), "withref.toml", &with_ref);
    let out = run_in(dir.path(), &["compare", config.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("MAE"), "stdout: {stdout}");
}

#[test]
fn shadowed_synthesis_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // No zero-delay tap and a Tx beam steered away from every arrival that
    // the Rx lobe can see: validation passes, synthesis cannot.
    let body = small_scenario("sinc", "")
        .replace("taps = [[0.0, 0.0], [40.0, -6.0], [110.0, -9.0]]", "taps = [[40.0, -6.0]]")
        .replace("gamma = 5.0", "gamma = 0.0")
        .replace(
            "kind = \"sinc\"\nhpbw_deg = 10.0\n\n[antenna.rx]",
            "kind = \"sinc\"\nhpbw_deg = 2.0\nboresight_deg = 90.0\n\n[antenna.rx]",
        )
        .replace(
            "kind = \"sinc\"\nhpbw_deg = 10.0\n\n[pdp]",
            "kind = \"sinc\"\nhpbw_deg = 2.0\n\n[pdp]",
        );
    let config = write_config(dir.path(), "shadowed.toml", &body);
    let out = run_in(dir.path(), &["run", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("shadowed"));
}

#[test]
fn quiet_suppresses_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "quiet.toml", &small_scenario("isotropic", ""));
    let out = bin()
        .args(["run", config.to_str().unwrap(), "--quiet", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(dir.path().join("points.csv").exists());
}
