use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fmq_core::io::{parse_config, sha256_hex, RunManifest};
use fmq_core::presets;

fn fmq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmq"))
        .args(args)
        .env_remove("FMQ_WORKERS")
        .output()
        .expect("fmq runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL: &str = r#"{"t_max": 10.0, "n_samples": 1001}"#;

#[test]
fn malformed_config_exits_2_and_names_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"dissipative": {"R": "big"}}"#);
    let out = fmq(&["simulate", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dissipative.R"), "{}", stderr(&out));
}

#[test]
fn out_of_domain_value_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"dephasing": {"alpha": -0.5}}"#);
    let out = fmq(&["simulate", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dephasing.alpha"), "{}", stderr(&out));
}

#[test]
fn missing_config_file_exits_2() {
    let out = fmq(&["simulate", "--config", "/nonexistent/fmq.json", "--print-config"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_preset_exits_2() {
    let out = fmq(&["preset", "show", "fig99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("fig2"));
}

#[test]
fn bad_bracket_exits_4() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = fmq(&["threshold", "--config", &cfg, "--alpha-lo", "0.5", "--alpha-hi", "0.2"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn sweep_argument_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let dir = tmp.path().join("s");
    let d = dir.to_str().unwrap();
    assert_eq!(fmq(&["sweep", "--config", &cfg, "--out", d]).status.code(), Some(2));
    let out = fmq(&["sweep", "--config", &cfg, "--out", d, "--param", "dephasing.beta=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dephasing.beta"));
}

#[test]
fn every_preset_round_trips_through_print_config() {
    let tmp = tempfile::tempdir().unwrap();
    for name in presets::names() {
        let out = fmq(&["simulate", "--preset", name, "--print-config"]);
        assert!(out.status.success(), "{name}");
        let text = String::from_utf8(out.stdout).unwrap();
        let parsed = parse_config(&text).unwrap();
        assert_eq!(parsed, presets::find(name).unwrap().base, "{name}");

        let cfg = write_config(tmp.path(), &text);
        let again = fmq(&["simulate", "--config", &cfg, "--print-config"]);
        assert_eq!(String::from_utf8(again.stdout).unwrap(), text, "{name}");
    }
}

#[test]
fn simulate_is_deterministic_and_manifest_matches_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = fmq(&["simulate", "--config", &cfg, "--out", dir.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let csv_a = fs::read(a.join("trajectory.csv")).unwrap();
    assert_eq!(csv_a, fs::read(b.join("trajectory.csv")).unwrap());
    assert_eq!(fs::read(a.join("summary.json")).unwrap(), fs::read(b.join("summary.json")).unwrap());

    let manifest: RunManifest = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.command, "simulate");
    assert_eq!(manifest.runs.len(), 1);
    assert_eq!(manifest.runs[0].grid.n_samples, 1001);
    assert_eq!(manifest.files.len(), 2);
    for f in &manifest.files {
        let bytes = fs::read(a.join(&f.path)).unwrap();
        assert_eq!(sha256_hex(&bytes), f.sha256, "{}", f.path);
        assert_eq!(bytes.len() as u64, f.bytes);
    }
    assert_eq!(String::from_utf8(csv_a).unwrap().lines().count(), 1002);
}

#[test]
fn sweep_over_modulation_frequency() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let dir = tmp.path().join("sweep");
    let out = fmq(&[
        "sweep",
        "--config",
        &cfg,
        "--param",
        "modulation.omega_mod_over_gamma=1,5,10",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    for i in 0..3 {
        let csv = fs::read_to_string(dir.join(format!("point_{i:04}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), 1002);
    }
    assert!(!dir.join("point_0003.csv").exists());

    let long = fs::read_to_string(dir.join("sweep_long.csv")).unwrap();
    assert!(long.starts_with("point,modulation.omega_mod_over_gamma,t,"));
    assert_eq!(long.lines().count(), 1 + 3 * 1001);

    let scalars = fs::read_to_string(dir.join("sweep_scalars.csv")).unwrap();
    let rows: Vec<_> = scalars.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    let omegas: Vec<f64> = rows.iter().map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(omegas, [1.0, 5.0, 10.0]);

    let manifest: RunManifest = serde_json::from_slice(&fs::read(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.files.len(), 5);
    assert_eq!(manifest.runs[2].config.modulation.omega_mod_over_gamma, 10.0);
}

#[test]
fn stronger_dephasing_shortens_coherence() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"modulation": {"delta_over_omega_mod": 0, "omega_mod_over_gamma": 0},
            "dissipative": {"R": 100, "tau1": 0},
            "t_max": 60.0, "n_samples": 3001}"#,
    );
    let dir = tmp.path().join("family");
    let out = fmq(&[
        "sweep",
        "--config",
        &cfg,
        "--param",
        "dephasing.alpha=0.01,0.1,0.5,1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let scalars = fs::read_to_string(dir.join("sweep_scalars.csv")).unwrap();
    let t_c: Vec<f64> = scalars
        .lines()
        .skip(1)
        .map(|r| r.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(t_c.len(), 4);
    for w in t_c.windows(2) {
        assert!(w[0] > w[1], "{t_c:?}");
    }
}

#[test]
fn threshold_report_is_json() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"dissipative": {"R": 100, "tau1": 2.6}, "dephasing": {"theta2": 0.01},
            "t_max": 200.0, "n_samples": 8001}"#,
    );
    let report_path = tmp.path().join("threshold.json");
    let out = fmq(&[
        "threshold",
        "--config",
        &cfg,
        "--alpha-lo",
        "0.05",
        "--alpha-hi",
        "0.5",
        "--alpha-tol",
        "0.01",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let alpha = report["alpha_th"].as_f64().unwrap();
    assert!(alpha > 0.05 && alpha < 0.5, "{alpha}");
    assert_eq!(report["omega_c_over_gamma"].as_f64(), Some(1.0));
    assert!(!report["history"].as_array().unwrap().is_empty());
    assert_eq!(fs::read(&report_path).unwrap(), out.stdout);
}

#[test]
fn preset_list_names_every_preset() {
    let out = fmq(&["preset", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in presets::names() {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
