//! C ABI over `fmq-core`.
//!
//! Every object crosses the boundary as an opaque handle created by an
//! `fmq_*` constructor and released by the matching `*_free`. Fallible calls
//! return an [`FmqStatus`]; on failure [`fmq_last_error`] describes what went
//! wrong on the calling thread. Strings handed out by the library are
//! released with [`fmq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fmq_core::analysis::{alpha_threshold, coherence_time, Interpolation, ThresholdOptions, ThresholdResult};
use fmq_core::config::{validate, SimulationConfig};
use fmq_core::dynamics::{simulate, Simulation};
use fmq_core::error::Error;
use fmq_core::{io, presets};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidConfig = 3,
    Solver = 4,
    Bracket = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Columns of a simulated trajectory, in CSV order.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmqColumn {
    Time = 0,
    CoherenceAbs = 1,
    Pg = 2,
    Pe = 3,
    Gamma1 = 4,
    Gamma2 = 5,
    Gamma3 = 6,
    BigGamma = 7,
    GammaTilde = 8,
    /// 1.0 where the dissipative rates are undefined, else 0.0.
    Singular = 9,
}

/// A simulation configuration.
pub struct FmqConfig(SimulationConfig);

/// A finished simulation.
pub struct FmqSimulation(Simulation);

/// A finished threshold search.
pub struct FmqThreshold(ThresholdResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> FmqStatus {
    match err.exit_code() {
        2 => FmqStatus::InvalidConfig,
        4 => FmqStatus::Bracket,
        _ => FmqStatus::Solver,
    }
}

fn fail(status: FmqStatus, message: impl Into<String>) -> FmqStatus {
    set_error(message);
    status
}

/// Run `body`, translating panics and errors into status codes.
fn guarded(body: impl FnOnce() -> Result<(), FmqStatus>) -> FmqStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FmqStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(FmqStatus::Panic, "internal panic"),
    }
}

fn core_err(err: Error) -> FmqStatus {
    fail(status_of(&err), err.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, FmqStatus> {
    if s.is_null() {
        return Err(fail(FmqStatus::NullPointer, "string argument is null"));
    }
    // SAFETY: caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| fail(FmqStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, FmqStatus> {
    // SAFETY: caller passes null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| fail(FmqStatus::NullPointer, "handle is null"))
}

fn out_ptr<T>(out: *mut T) -> Result<*mut T, FmqStatus> {
    if out.is_null() {
        Err(fail(FmqStatus::NullPointer, "output pointer is null"))
    } else {
        Ok(out)
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next `fmq_*` call on the same thread.
#[no_mangle]
pub extern "C" fn fmq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fmq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fmq_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` came from `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parse a JSON configuration; missing fields take their defaults.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fmq_config_from_json(json: *const c_char, out: *mut *mut FmqConfig) -> FmqStatus {
    guarded(|| {
        let out = out_ptr(out)?;
        let text = unsafe { read_str(json) }?;
        let config = io::parse_config(text).map_err(core_err)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(FmqConfig(config))) };
        Ok(())
    })
}

/// Base configuration of a named preset.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fmq_config_preset(name: *const c_char, out: *mut *mut FmqConfig) -> FmqStatus {
    guarded(|| {
        let out = out_ptr(out)?;
        let name = unsafe { read_str(name) }?;
        let preset = presets::find(name)
            .ok_or_else(|| fail(FmqStatus::InvalidConfig, format!("unknown preset {name:?}")))?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(FmqConfig(preset.base))) };
        Ok(())
    })
}

/// Serialize a configuration to JSON. Release the string with
/// [`fmq_string_free`].
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fmq_config_to_json(config: *const FmqConfig, out: *mut *mut c_char) -> FmqStatus {
    guarded(|| {
        let out = out_ptr(out)?;
        let config = unsafe { handle(config) }?;
        // SAFETY: checked non-null above.
        unsafe { *out = into_c_string(io::config_to_json(&config.0)) };
        Ok(())
    })
}

/// # Safety
/// `config` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fmq_config_free(config: *mut FmqConfig) {
    if !config.is_null() {
        // SAFETY: the handle was created by `Box::into_raw`.
        drop(unsafe { Box::from_raw(config) });
    }
}

/// Validate and simulate `config`.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fmq_simulate(config: *const FmqConfig, out: *mut *mut FmqSimulation) -> FmqStatus {
    guarded(|| {
        let out = out_ptr(out)?;
        let config = unsafe { handle(config) }?;
        let validated = validate(config.0.clone()).map_err(core_err)?;
        let sim = simulate(&validated).map_err(core_err)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(FmqSimulation(sim))) };
        Ok(())
    })
}

/// Number of grid samples, or 0 for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fmq_simulation_len(sim: *const FmqSimulation) -> usize {
    // SAFETY: caller contract.
    unsafe { sim.as_ref() }.map_or(0, |s| s.0.trajectory.times.len())
}

/// Copy one column into `buf`, which must hold at least
/// [`fmq_simulation_len`] values.
///
/// # Safety
/// `sim` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fmq_simulation_copy_column(
    sim: *const FmqSimulation,
    column: FmqColumn,
    buf: *mut f64,
    len: usize,
) -> FmqStatus {
    guarded(|| {
        let sim = &unsafe { handle(sim) }?.0;
        let buf = out_ptr(buf)?;
        let n = sim.trajectory.times.len();
        if len < n {
            return Err(fail(
                FmqStatus::BufferTooSmall,
                format!("buffer holds {len} values, need {n}"),
            ));
        }
        // SAFETY: `buf` holds at least `n` doubles per the check above.
        let dst = unsafe { std::slice::from_raw_parts_mut(buf, n) };
        let t = &sim.trajectory;
        let src: Vec<f64> = match column {
            FmqColumn::Time => t.times.clone(),
            FmqColumn::CoherenceAbs => t.coherence_abs.clone(),
            FmqColumn::Pg => t.pg.clone(),
            FmqColumn::Pe => t.pe(),
            FmqColumn::Gamma1 => sim.rates.gamma1.clone(),
            FmqColumn::Gamma2 => sim.rates.gamma2.clone(),
            FmqColumn::Gamma3 => sim.dephasing.gamma3.clone(),
            FmqColumn::BigGamma => sim.rates.big_gamma.clone(),
            FmqColumn::GammaTilde => sim.dephasing.gamma_tilde.clone(),
            FmqColumn::Singular => sim.rates.singular_mask.iter().map(|&m| f64::from(u8::from(m))).collect(),
        };
        dst.copy_from_slice(&src);
        Ok(())
    })
}

/// Coherence time of the simulated trajectory. `*found` is false when the
/// envelope never reaches `|ζ(0)|/e` on the grid, in which case `*t_c` is
/// left untouched.
///
/// # Safety
/// `sim` must be a live handle; `t_c` and `found` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fmq_simulation_coherence_time(
    sim: *const FmqSimulation,
    t_c: *mut f64,
    found: *mut bool,
) -> FmqStatus {
    guarded(|| {
        let sim = &unsafe { handle(sim) }?.0;
        let t_c = out_ptr(t_c)?;
        let found = out_ptr(found)?;
        let traj = &sim.trajectory;
        let zeta0 = sim.config.config().initial.zeta0.norm();
        let value = coherence_time(&traj.times, &traj.coherence_abs, zeta0, Interpolation::Linear);
        // SAFETY: both checked non-null above.
        unsafe {
            *found = value.is_some();
            if let Some(v) = value {
                *t_c = v;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fmq_simulation_free(sim: *mut FmqSimulation) {
    if !sim.is_null() {
        // SAFETY: the handle was created by `Box::into_raw`.
        drop(unsafe { Box::from_raw(sim) });
    }
}

/// Bisect for the dephasing coupling at which driven and undriven coherence
/// times match, with default tolerances.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fmq_threshold(
    config: *const FmqConfig,
    alpha_lo: f64,
    alpha_hi: f64,
    out: *mut *mut FmqThreshold,
) -> FmqStatus {
    guarded(|| {
        let out = out_ptr(out)?;
        let config = unsafe { handle(config) }?;
        let result = alpha_threshold(&config.0, (alpha_lo, alpha_hi), &ThresholdOptions::default())
            .map_err(core_err)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(FmqThreshold(result))) };
        Ok(())
    })
}

/// Threshold coupling, or NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fmq_threshold_alpha(result: *const FmqThreshold) -> f64 {
    // SAFETY: caller contract.
    unsafe { result.as_ref() }.map_or(f64::NAN, |r| r.0.alpha_th)
}

/// Full result, including the bisection history, as JSON. Release the
/// string with [`fmq_string_free`].
///
/// # Safety
/// `result` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fmq_threshold_to_json(result: *const FmqThreshold, out: *mut *mut c_char) -> FmqStatus {
    guarded(|| {
        let out = out_ptr(out)?;
        let result = unsafe { handle(result) }?;
        let text = serde_json::to_string_pretty(&result.0).expect("threshold result serializes");
        // SAFETY: checked non-null above.
        unsafe { *out = into_c_string(text) };
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fmq_threshold_free(result: *mut FmqThreshold) {
    if !result.is_null() {
        // SAFETY: the handle was created by `Box::into_raw`.
        drop(unsafe { Box::from_raw(result) });
    }
}
