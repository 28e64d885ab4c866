use std::ffi::{CStr, CString};
use std::ptr;

use fmq_ffi::*;

fn last_error() -> String {
    let p = fmq_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn config_from(json: &str) -> *mut FmqConfig {
    let text = CString::new(json).unwrap();
    let mut cfg = ptr::null_mut();
    let status = unsafe { fmq_config_from_json(text.as_ptr(), &mut cfg) };
    assert_eq!(status, FmqStatus::Ok);
    cfg
}

#[test]
fn simulate_and_read_columns() {
    let cfg = config_from(r#"{"t_max": 5.0, "n_samples": 201}"#);
    let mut sim = ptr::null_mut();
    assert_eq!(unsafe { fmq_simulate(cfg, &mut sim) }, FmqStatus::Ok);
    let n = unsafe { fmq_simulation_len(sim) };
    assert_eq!(n, 201);

    let mut t = vec![0.0; n];
    let mut pg = vec![0.0; n];
    let mut pe = vec![0.0; n];
    unsafe {
        assert_eq!(fmq_simulation_copy_column(sim, FmqColumn::Time, t.as_mut_ptr(), n), FmqStatus::Ok);
        assert_eq!(fmq_simulation_copy_column(sim, FmqColumn::Pg, pg.as_mut_ptr(), n), FmqStatus::Ok);
        assert_eq!(fmq_simulation_copy_column(sim, FmqColumn::Pe, pe.as_mut_ptr(), n), FmqStatus::Ok);
    }
    assert_eq!(t[0], 0.0);
    assert!((t[n - 1] - 5.0).abs() < 1e-12);
    for i in 0..n {
        assert!((pg[i] + pe[i] - 1.0).abs() < 1e-12);
    }

    let mut short = vec![0.0; n - 1];
    let status = unsafe { fmq_simulation_copy_column(sim, FmqColumn::Time, short.as_mut_ptr(), n - 1) };
    assert_eq!(status, FmqStatus::BufferTooSmall);
    assert!(last_error().contains("need 201"));

    unsafe {
        fmq_simulation_free(sim);
        fmq_config_free(cfg);
    }
}

#[test]
fn coherence_time_of_markovian_decay() {
    // Broad reservoir at zero temperature: |ζ| ≈ |ζ(0)| e^{-t/2}, so t_c ≈ 2.
    let cfg = config_from(
        r#"{"dissipative": {"R": 0.01, "tau1": 0.0}, "t_max": 5.0, "n_samples": 5001}"#,
    );
    let mut sim = ptr::null_mut();
    assert_eq!(unsafe { fmq_simulate(cfg, &mut sim) }, FmqStatus::Ok);
    let mut t_c = f64::NAN;
    let mut found = false;
    assert_eq!(unsafe { fmq_simulation_coherence_time(sim, &mut t_c, &mut found) }, FmqStatus::Ok);
    assert!(found);
    assert!((t_c - 2.0).abs() < 0.02, "{t_c}");
    unsafe {
        fmq_simulation_free(sim);
        fmq_config_free(cfg);
    }
}

#[test]
fn malformed_config_reports_path() {
    let text = CString::new(r#"{"dephasing": {"alpha": "lots"}}"#).unwrap();
    let mut cfg = ptr::null_mut();
    let status = unsafe { fmq_config_from_json(text.as_ptr(), &mut cfg) };
    assert_eq!(status, FmqStatus::InvalidConfig);
    assert!(cfg.is_null());
    assert!(last_error().contains("dephasing.alpha"));
}

#[test]
fn invalid_values_fail_at_simulate() {
    let cfg = config_from(r#"{"dephasing": {"alpha": -1.0}}"#);
    let mut sim = ptr::null_mut();
    assert_eq!(unsafe { fmq_simulate(cfg, &mut sim) }, FmqStatus::InvalidConfig);
    assert!(sim.is_null());
    unsafe { fmq_config_free(cfg) };
}

#[test]
fn null_arguments_are_rejected() {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { fmq_config_from_json(ptr::null(), &mut cfg) }, FmqStatus::NullPointer);
    let mut sim = ptr::null_mut();
    assert_eq!(unsafe { fmq_simulate(ptr::null(), &mut sim) }, FmqStatus::NullPointer);
    assert_eq!(unsafe { fmq_simulation_len(ptr::null()) }, 0);
    assert!(unsafe { fmq_threshold_alpha(ptr::null()) }.is_nan());
    unsafe {
        fmq_config_free(ptr::null_mut());
        fmq_simulation_free(ptr::null_mut());
        fmq_threshold_free(ptr::null_mut());
        fmq_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8_is_reported() {
    let bytes = [0xffu8, 0xfe, 0];
    let mut cfg = ptr::null_mut();
    let status = unsafe { fmq_config_from_json(bytes.as_ptr().cast(), &mut cfg) };
    assert_eq!(status, FmqStatus::InvalidUtf8);
}

#[test]
fn presets_round_trip_through_json() {
    for name in fmq_core::presets::names() {
        let cname = CString::new(name).unwrap();
        let mut cfg = ptr::null_mut();
        assert_eq!(unsafe { fmq_config_preset(cname.as_ptr(), &mut cfg) }, FmqStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(unsafe { fmq_config_to_json(cfg, &mut json) }, FmqStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        let parsed = fmq_core::io::parse_config(&text).unwrap();
        assert_eq!(parsed, fmq_core::presets::find(name).unwrap().base, "{name}");
        unsafe {
            fmq_string_free(json);
            fmq_config_free(cfg);
        }
    }
    let bogus = CString::new("fig99").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { fmq_config_preset(bogus.as_ptr(), &mut cfg) }, FmqStatus::InvalidConfig);
}

#[test]
fn degenerate_threshold_bracket() {
    let cfg = config_from("{}");
    let mut res = ptr::null_mut();
    let status = unsafe { fmq_threshold(cfg, 0.5, 0.5, &mut res) };
    assert_eq!(status, FmqStatus::Bracket);
    assert!(res.is_null());
    unsafe { fmq_config_free(cfg) };
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(fmq_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fmq.h")).unwrap();
    for symbol in ["fmq_simulate", "fmq_threshold_to_json", "FMQ_STATUS_BUFFER_TOO_SMALL", "typedef struct FmqConfig FmqConfig"] {
        assert!(header.contains(symbol), "{symbol}");
    }
}
