//! End-to-end tests of the `vortexgas` binary: artifact shapes, strict config
//! parsing, overrides, and structured error records.

use std::path::Path;
use std::process::{Command, Output};

fn vortexgas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vortexgas"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn simulate_writes_trajectory_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(
        &config,
        r#"{
            "geometry": {"kind": "plane"},
            "vortices": [
                {"re": 0.0, "im": 0.0, "charge": 1},
                {"re": 1.0, "im": 0.0, "charge": -1}
            ],
            "simulate": {"t_end": 1.0, "output_stride": 0.5, "annihilation": false}
        }"#,
    );
    let out = dir.path().join("out");
    let result = vortexgas(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");

    let trajectory = read(&out.join("trajectory.csv"));
    let lines: Vec<&str> = trajectory.lines().collect();
    assert_eq!(lines[0], "time,vortex_index,charge,re,im");
    // 3 states (t = 0, 0.5, 1) x 2 vortices.
    assert_eq!(lines.len(), 1 + 6);

    let sidecar: serde_json::Value =
        serde_json::from_str(&read(&out.join("conserved.json"))).unwrap();
    assert_eq!(sidecar["series"].as_array().unwrap().len(), 3);
    assert_eq!(sidecar["events"].as_array().unwrap().len(), 0);

    let manifest: serde_json::Value =
        serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["config"]["simulate"]["t_end"], 1.0);
}

#[test]
fn simulate_on_sphere_reports_genus_zero() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(
        &config,
        r#"{
            "geometry": {"kind": "sphere"},
            "vortices": [{"re": 0.0, "im": 0.0, "charge": 1}],
            "simulate": {"t_end": 1.0}
        }"#,
    );
    let out = dir.path().join("out");
    let result = vortexgas(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    let record: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(record["error"]["kind"], "admissibility");
    assert!(record["error"]["message"]
        .as_str()
        .unwrap()
        .contains("genus 0"));
    // The record is also left in the output directory.
    let on_disk: serde_json::Value =
        serde_json::from_str(&read(&out.join("error.json"))).unwrap();
    assert_eq!(on_disk["error"]["kind"], "admissibility");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(&config, r#"{"geometry": {"kind": "plane"}, "nope": 1}"#);
    let result = vortexgas(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    let record: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(record["error"]["kind"], "config");
    assert!(record["error"]["message"].as_str().unwrap().contains("nope"));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(&config, "{\n  \"geometry\": }\n");
    let result = vortexgas(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn set_overrides_scalars_and_seed_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(
        &config,
        r#"{
            "seed": 1,
            "geometry": {"kind": "torus", "L1": 1.0, "L2": 1.0},
            "sample": {"n_pairs": 2, "beta": 5.0, "n_sweeps": 50, "n_burn": 10}
        }"#,
    );
    let out = dir.path().join("out");
    let result = vortexgas(&[
        "sample",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--set",
        "sample.beta=1e-9",
        "--seed",
        "77",
    ]);
    assert!(result.status.success(), "{result:?}");
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&out.join("manifest.json"))).unwrap();
    assert_eq!(manifest["seed"], 77);
    assert_eq!(manifest["config"]["sample"]["beta"], 1e-9);
    let stats: serde_json::Value =
        serde_json::from_str(&read(&out.join("stats.json"))).unwrap();
    assert!(stats["acceptance_rate"].as_f64().unwrap() > 0.99);
}

#[test]
fn override_rejects_non_scalar_target() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(&config, r#"{"geometry": {"kind": "plane"}}"#);
    let result = vortexgas(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "--set",
        "geometry={\"kind\":\"sphere\"}",
    ]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    let record: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(record["error"]["kind"], "override");
}

#[test]
fn order_parameter_grid_shape_and_branches() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(
        &config,
        r#"{
            "order_parameter": {
                "model": "default",
                "t_start": 0.0, "t_stop": 2.0, "t_points": 101
            }
        }"#,
    );
    let out = dir.path().join("out");
    let result = vortexgas(&[
        "order-parameter",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");
    let csv = read(&out.join("order_parameter.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "T,psi_min,branch,F_min");
    assert_eq!(lines.len(), 102);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        let t: f64 = fields[0].parse().unwrap();
        let psi: f64 = fields[1].parse().unwrap();
        if t >= 1.0 {
            assert_eq!(psi, 0.0, "psi nonzero at T={t}");
            assert_eq!(fields[2], "normal");
        } else {
            assert!(psi > 0.0);
            assert_eq!(fields[2], "superfluid");
        }
    }
}

#[test]
fn check_recovers_conservation_from_stored_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let sim_config = dir.path().join("sim.json");
    write(
        &sim_config,
        r#"{
            "geometry": {"kind": "plane"},
            "vortices": [
                {"re": 0.0, "im": 0.0, "charge": 1},
                {"re": 1.0, "im": 0.0, "charge": -1}
            ],
            "simulate": {"t_end": 2.0, "output_stride": 0.1, "annihilation": false}
        }"#,
    );
    let sim_out = dir.path().join("sim");
    assert!(vortexgas(&[
        "simulate",
        "--config",
        sim_config.to_str().unwrap(),
        "--out",
        sim_out.to_str().unwrap(),
    ])
    .status
    .success());

    let check_config = dir.path().join("check.json");
    write(
        &check_config,
        r#"{
            "geometry": {"kind": "plane"},
            "check": {"trajectory": "sim/trajectory.csv"}
        }"#,
    );
    let check_out = dir.path().join("check");
    let result = vortexgas(&[
        "check",
        "--config",
        check_config.to_str().unwrap(),
        "--out",
        check_out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");
    let report: serde_json::Value =
        serde_json::from_str(&read(&check_out.join("conservation_report.json"))).unwrap();
    assert_eq!(report["states"], 21);
    assert_eq!(report["q_constant"], true);
    assert!(report["max_rel_drift_energy"].as_f64().unwrap() < 1e-8);
    assert!(report["max_rel_drift_dipole"].as_f64().unwrap() < 1e-8);
    assert!(report["max_rel_drift_angular"].as_f64().unwrap() < 1e-6);
}

#[test]
fn field_masks_singular_samples_with_empty_fields() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(
        &config,
        r#"{
            "field": {
                "divisor": [{"re": 0.0, "im": 0.0, "order": 1}],
                "window": {"x_min": -1.0, "x_max": 1.0, "y_min": -1.0, "y_max": 1.0},
                "nx": 3, "ny": 3
            }
        }"#,
    );
    let out = dir.path().join("out");
    assert!(vortexgas(&[
        "field",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
    .status
    .success());
    let csv = read(&out.join("field.csv"));
    let masked: Vec<&str> = csv.lines().filter(|l| l.ends_with(",,")).collect();
    assert_eq!(masked.len(), 1);
    assert!(masked[0].starts_with("0.0000000000000000e0,0.0000000000000000e0"));
}

#[test]
fn thread_cap_does_not_change_scan_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(
        &config,
        r#"{
            "seed": 11,
            "geometry": {"kind": "torus", "L1": 1.0, "L2": 1.0},
            "scan": {"beta_grid": [0.5, 1.0, 4.0], "n_pairs": 3, "n_sweeps": 80, "n_burn": 20}
        }"#,
    );
    let out_default = dir.path().join("default");
    let out_capped = dir.path().join("capped");
    assert!(vortexgas(&[
        "scan",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_default.to_str().unwrap(),
    ])
    .status
    .success());
    let capped = Command::new(env!("CARGO_BIN_EXE_vortexgas"))
        .env("VORTEXGAS_THREADS", "1")
        .args([
            "scan",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_capped.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(capped.status.success());
    assert_eq!(
        read(&out_default.join("scan.csv")),
        read(&out_capped.join("scan.csv")),
        "worker cap changed the scan output"
    );
}

#[test]
fn scan_emits_one_row_per_beta() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    write(
        &config,
        r#"{
            "seed": 3,
            "geometry": {"kind": "torus", "L1": 1.0, "L2": 1.0},
            "scan": {"beta_grid": [0.5, 1.0, 2.0], "n_pairs": 2, "n_sweeps": 50, "n_burn": 10}
        }"#,
    );
    let out = dir.path().join("out");
    assert!(vortexgas(&[
        "scan",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
    .status
    .success());
    let csv = read(&out.join("scan.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "beta,mean_energy,acceptance,dipole_fraction,mean_nn_distance"
    );
    assert_eq!(lines.len(), 4);
}
