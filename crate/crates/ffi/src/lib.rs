//! C ABI over the batstrip library.
//!
//! The surface is a plain-old-data analysis struct, two opaque handles
//! (optimizer parameters and run results), and status codes. The build
//! script regenerates `include/batstrip.h` from this file.
//!
//! Ownership: `batstrip_params_new`, `batstrip_design_run`, and
//! `batstrip_bench_run` return pointers the caller must release with the
//! matching `*_free`; every other function borrows. Null pointers are
//! reported as a status, never dereferenced, and `*_free` accepts null.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use batstrip::bat::{run, BatParams, RunResult, SearchSpace, Termination};
use batstrip::bench::BenchFunction;
use batstrip::design::{CouplerObjective, DesignSpec};
use batstrip::microstrip::{analyze, CouplerGeometry};

/// Outcome of one C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatstripStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument or parameter set failed validation.
    InvalidInput = 2,
    /// The optimization run aborted internally.
    RunFailed = 3,
}

/// Analysis outputs of one coupled-microstrip geometry.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BatstripAnalysis {
    /// Strip width over substrate thickness.
    pub w_over_h: f64,
    /// Strip spacing over substrate thickness.
    pub s_over_h: f64,
    /// Spacing structure parameter.
    pub g: f64,
    /// Width-plus-spacing structure parameter.
    pub h_param: f64,
    /// Even-mode equivalent single-line shape ratio.
    pub whse: f64,
    /// Odd-mode equivalent single-line shape ratio.
    pub whso: f64,
    /// Even-mode impedance in ohms.
    pub zoe: f64,
    /// Odd-mode impedance in ohms.
    pub zoo: f64,
    /// Coupling coefficient.
    pub coupling: f64,
}

/// Opaque optimizer parameter set; create with `batstrip_params_new`.
pub struct BatstripParams {
    inner: BatParams,
}

/// Opaque result of one optimization run.
pub struct BatstripResult {
    inner: RunResult,
}

/// Analyzes one geometry and fills `out`.
///
/// Fails with `InvalidInput` for non-positive dimensions or a dielectric
/// constant outside (1, 6).
///
/// # Safety
///
/// `out` must be null or valid for writing one `BatstripAnalysis`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_analyze(
    w: f64,
    s: f64,
    h: f64,
    eps_r: f64,
    out: *mut BatstripAnalysis,
) -> BatstripStatus {
    if out.is_null() {
        return BatstripStatus::NullPointer;
    }
    let analysis = match CouplerGeometry::new(w, s, h, eps_r).and_then(|g| analyze(&g)) {
        Ok(a) => a,
        Err(_) => return BatstripStatus::InvalidInput,
    };
    unsafe {
        *out = BatstripAnalysis {
            w_over_h: analysis.w_over_h,
            s_over_h: analysis.s_over_h,
            g: analysis.g,
            h_param: analysis.h_param,
            whse: analysis.whse,
            whso: analysis.whso,
            zoe: analysis.zoe,
            zoo: analysis.zoo,
            coupling: analysis.coupling,
        };
    }
    BatstripStatus::Ok
}

/// Allocates a parameter set preloaded with the library defaults.
#[no_mangle]
pub extern "C" fn batstrip_params_new() -> *mut BatstripParams {
    Box::into_raw(Box::new(BatstripParams {
        inner: BatParams::default(),
    }))
}

/// Releases a parameter set; accepts null.
///
/// # Safety
///
/// `params` must be null or a pointer from `batstrip_params_new` that has
/// not already been freed.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_free(params: *mut BatstripParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

unsafe fn set_field(
    params: *mut BatstripParams,
    write: impl FnOnce(&mut BatParams),
) -> BatstripStatus {
    match unsafe { params.as_mut() } {
        Some(p) => {
            write(&mut p.inner);
            BatstripStatus::Ok
        }
        None => BatstripStatus::NullPointer,
    }
}

/// Sets the number of bats.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_pop_size(
    params: *mut BatstripParams,
    value: usize,
) -> BatstripStatus {
    set_field(params, |p| p.pop_size = value)
}

/// Sets the lower frequency limit.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_fmin(
    params: *mut BatstripParams,
    value: f64,
) -> BatstripStatus {
    set_field(params, |p| p.f_min = value)
}

/// Sets the upper frequency limit.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_fmax(
    params: *mut BatstripParams,
    value: f64,
) -> BatstripStatus {
    set_field(params, |p| p.f_max = value)
}

/// Sets the loudness decay factor, in (0, 1).
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_alpha(
    params: *mut BatstripParams,
    value: f64,
) -> BatstripStatus {
    set_field(params, |p| p.alpha = value)
}

/// Sets the pulse-rate growth rate, positive.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_gamma(
    params: *mut BatstripParams,
    value: f64,
) -> BatstripStatus {
    set_field(params, |p| p.gamma = value)
}

/// Sets the pulse-rate ceiling, in (0, 1].
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_r0(
    params: *mut BatstripParams,
    value: f64,
) -> BatstripStatus {
    set_field(params, |p| p.r0 = value)
}

/// Sets the initial loudness, positive.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_a0(
    params: *mut BatstripParams,
    value: f64,
) -> BatstripStatus {
    set_field(params, |p| p.a0 = value)
}

/// Sets how many worst bats are replaced each iteration.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_replace_count(
    params: *mut BatstripParams,
    value: usize,
) -> BatstripStatus {
    set_field(params, |p| p.replace_count = value)
}

/// Sets the iteration budget.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_max_iter(
    params: *mut BatstripParams,
    value: usize,
) -> BatstripStatus {
    set_field(params, |p| p.max_iter = value)
}

/// Sets the stopping tolerance on the best cost.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`.
#[no_mangle]
pub unsafe extern "C" fn batstrip_params_set_tol(
    params: *mut BatstripParams,
    value: f64,
) -> BatstripStatus {
    set_field(params, |p| p.tol = value)
}

unsafe fn run_to_handle(
    objective: &dyn batstrip::bat::Objective,
    params: &BatParams,
    space: &SearchSpace,
    seed: u64,
    out: *mut *mut BatstripResult,
) -> BatstripStatus {
    let outcome = catch_unwind(AssertUnwindSafe(|| run(objective, params, space, seed)));
    match outcome {
        Ok(Ok(result)) => {
            let handle = Box::into_raw(Box::new(BatstripResult { inner: result }));
            unsafe { *out = handle };
            BatstripStatus::Ok
        }
        Ok(Err(_)) => BatstripStatus::InvalidInput,
        Err(_) => BatstripStatus::RunFailed,
    }
}

/// Runs a coupler design toward `target_coupling` on substrate `eps_r`.
///
/// `lower` and `upper` either both point at three values bounding
/// `(w, s, h)` or are both null to use the default box, 0.5 to 20 in each
/// dimension. On success `*out` receives an owned result handle.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`,
/// `lower` and `upper` must each be null or readable for three values, and
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn batstrip_design_run(
    params: *const BatstripParams,
    target_coupling: f64,
    eps_r: f64,
    lower: *const f64,
    upper: *const f64,
    seed: u64,
    out: *mut *mut BatstripResult,
) -> BatstripStatus {
    let Some(params) = (unsafe { params.as_ref() }) else {
        return BatstripStatus::NullPointer;
    };
    if out.is_null() || lower.is_null() != upper.is_null() {
        return BatstripStatus::NullPointer;
    }
    let mut spec = DesignSpec {
        target_coupling,
        eps_r,
        ..DesignSpec::default()
    };
    if !lower.is_null() {
        let lo = unsafe { std::slice::from_raw_parts(lower, 3) };
        let hi = unsafe { std::slice::from_raw_parts(upper, 3) };
        spec.bounds = match SearchSpace::new(lo.to_vec(), hi.to_vec()) {
            Ok(b) => b,
            Err(_) => return BatstripStatus::InvalidInput,
        };
    }
    let objective = match CouplerObjective::new(spec) {
        Ok(o) => o,
        Err(_) => return BatstripStatus::InvalidInput,
    };
    let bounds = objective.spec().bounds.clone();
    run_to_handle(&objective, &params.inner, &bounds, seed, out)
}

/// Runs a benchmark function (`"sphere"`, `"rosenbrock"`, or
/// `"rastrigin"`) at the given dimensionality on its conventional domain.
///
/// On success `*out` receives an owned result handle.
///
/// # Safety
///
/// `params` must be null or a live pointer from `batstrip_params_new`,
/// `function` must be null or a NUL-terminated string, and `out` must be
/// null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn batstrip_bench_run(
    params: *const BatstripParams,
    function: *const c_char,
    dims: usize,
    seed: u64,
    out: *mut *mut BatstripResult,
) -> BatstripStatus {
    let Some(params) = (unsafe { params.as_ref() }) else {
        return BatstripStatus::NullPointer;
    };
    if function.is_null() || out.is_null() {
        return BatstripStatus::NullPointer;
    }
    let Ok(name) = (unsafe { CStr::from_ptr(function) }).to_str() else {
        return BatstripStatus::InvalidInput;
    };
    let objective = match BenchFunction::by_name(name, dims) {
        Ok(f) => f,
        Err(_) => return BatstripStatus::InvalidInput,
    };
    let space = objective.default_bounds.clone();
    run_to_handle(&objective, &params.inner, &space, seed, out)
}

/// Releases a run result; accepts null.
///
/// # Safety
///
/// `result` must be null or a pointer from a `*_run` call that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn batstrip_result_free(result: *mut BatstripResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

/// Best cost found; NaN for a null handle.
///
/// # Safety
///
/// `result` must be null or a live pointer from a `*_run` call.
#[no_mangle]
pub unsafe extern "C" fn batstrip_result_best_fitness(result: *const BatstripResult) -> f64 {
    match unsafe { result.as_ref() } {
        Some(r) => r.inner.best_fitness,
        None => f64::NAN,
    }
}

/// Iterations executed; 0 for a null handle.
///
/// # Safety
///
/// `result` must be null or a live pointer from a `*_run` call.
#[no_mangle]
pub unsafe extern "C" fn batstrip_result_iterations(result: *const BatstripResult) -> usize {
    match unsafe { result.as_ref() } {
        Some(r) => r.inner.iterations_used,
        None => 0,
    }
}

/// True when the run stopped by reaching the tolerance.
///
/// # Safety
///
/// `result` must be null or a live pointer from a `*_run` call.
#[no_mangle]
pub unsafe extern "C" fn batstrip_result_reached_tolerance(result: *const BatstripResult) -> bool {
    match unsafe { result.as_ref() } {
        Some(r) => r.inner.terminated == Termination::ToleranceReached,
        None => false,
    }
}

/// Dimensionality of the best position; 0 for a null handle.
///
/// # Safety
///
/// `result` must be null or a live pointer from a `*_run` call.
#[no_mangle]
pub unsafe extern "C" fn batstrip_result_dims(result: *const BatstripResult) -> usize {
    match unsafe { result.as_ref() } {
        Some(r) => r.inner.best_position.len(),
        None => 0,
    }
}

/// Copies the best position into `out`, which must hold exactly
/// `batstrip_result_dims` values.
///
/// # Safety
///
/// `result` must be null or a live pointer from a `*_run` call, and `out`
/// must be null or valid for writing `len` values.
#[no_mangle]
pub unsafe extern "C" fn batstrip_result_best_position(
    result: *const BatstripResult,
    out: *mut f64,
    len: usize,
) -> BatstripStatus {
    let Some(r) = (unsafe { result.as_ref() }) else {
        return BatstripStatus::NullPointer;
    };
    if out.is_null() {
        return BatstripStatus::NullPointer;
    }
    if len != r.inner.best_position.len() {
        return BatstripStatus::InvalidInput;
    }
    let target = unsafe { std::slice::from_raw_parts_mut(out, len) };
    target.copy_from_slice(&r.inner.best_position);
    BatstripStatus::Ok
}

/// Number of convergence records; 0 for a null handle.
///
/// # Safety
///
/// `result` must be null or a live pointer from a `*_run` call.
#[no_mangle]
pub unsafe extern "C" fn batstrip_result_history_len(result: *const BatstripResult) -> usize {
    match unsafe { result.as_ref() } {
        Some(r) => r.inner.history.len(),
        None => 0,
    }
}

/// Best cost recorded after iteration `index + 1`.
///
/// # Safety
///
/// `result` must be null or a live pointer from a `*_run` call, and `out`
/// must be null or valid for writing one value.
#[no_mangle]
pub unsafe extern "C" fn batstrip_result_history_fitness(
    result: *const BatstripResult,
    index: usize,
    out: *mut f64,
) -> BatstripStatus {
    let Some(r) = (unsafe { result.as_ref() }) else {
        return BatstripStatus::NullPointer;
    };
    if out.is_null() {
        return BatstripStatus::NullPointer;
    }
    match r.inner.history.get(index) {
        Some(record) => {
            unsafe { *out = record.best_fitness };
            BatstripStatus::Ok
        }
        None => BatstripStatus::InvalidInput,
    }
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn batstrip_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
