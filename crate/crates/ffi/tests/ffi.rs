use std::ffi::{CStr, CString};
use std::path::Path;
use std::ptr;

use batstrip::microstrip::{analyze, CouplerGeometry};
use batstrip_ffi::{
    batstrip_analyze, batstrip_bench_run, batstrip_design_run, batstrip_params_free,
    batstrip_params_new, batstrip_params_set_alpha, batstrip_params_set_max_iter,
    batstrip_params_set_pop_size, batstrip_params_set_tol, batstrip_result_best_fitness,
    batstrip_result_best_position, batstrip_result_dims, batstrip_result_free,
    batstrip_result_history_fitness, batstrip_result_history_len, batstrip_result_iterations,
    batstrip_result_reached_tolerance, batstrip_version, BatstripAnalysis, BatstripResult,
    BatstripStatus,
};

#[test]
fn analyze_matches_the_library() {
    let mut out = BatstripAnalysis::default();
    let status = unsafe { batstrip_analyze(7.9, 1.7, 4.3, 3.9, &mut out) };
    assert_eq!(status, BatstripStatus::Ok);
    let expected = analyze(&CouplerGeometry::new(7.9, 1.7, 4.3, 3.9).unwrap()).unwrap();
    assert_eq!(out.w_over_h, expected.w_over_h);
    assert_eq!(out.s_over_h, expected.s_over_h);
    assert_eq!(out.g, expected.g);
    assert_eq!(out.h_param, expected.h_param);
    assert_eq!(out.whse, expected.whse);
    assert_eq!(out.whso, expected.whso);
    assert_eq!(out.zoe, expected.zoe);
    assert_eq!(out.zoo, expected.zoo);
    assert_eq!(out.coupling, expected.coupling);
}

#[test]
fn analyze_reports_bad_input_and_null() {
    unsafe {
        let mut out = BatstripAnalysis::default();
        assert_eq!(
            batstrip_analyze(1.0, 1.0, 1.0, 7.0, &mut out),
            BatstripStatus::InvalidInput
        );
        assert_eq!(
            batstrip_analyze(0.0, 1.0, 1.0, 3.9, &mut out),
            BatstripStatus::InvalidInput
        );
        assert_eq!(
            batstrip_analyze(1.0, 1.0, 1.0, 3.9, ptr::null_mut()),
            BatstripStatus::NullPointer
        );
    }
}

#[test]
fn design_run_round_trips_through_handles() {
    unsafe {
        let params = batstrip_params_new();
        assert_eq!(batstrip_params_set_pop_size(params, 10), BatstripStatus::Ok);
        assert_eq!(batstrip_params_set_max_iter(params, 60), BatstripStatus::Ok);
        assert_eq!(batstrip_params_set_tol(params, 1e-3), BatstripStatus::Ok);

        let mut result: *mut BatstripResult = ptr::null_mut();
        let status =
            batstrip_design_run(params, 0.2, 3.9, ptr::null(), ptr::null(), 1, &mut result);
        assert_eq!(status, BatstripStatus::Ok);
        assert!(!result.is_null());

        let fitness = batstrip_result_best_fitness(result);
        assert!(fitness.is_finite() && fitness >= 0.0);
        assert_eq!(batstrip_result_dims(result), 3);

        let mut position = [0.0f64; 3];
        assert_eq!(
            batstrip_result_best_position(result, position.as_mut_ptr(), 3),
            BatstripStatus::Ok
        );
        assert!(position.iter().all(|v| (0.5..=20.0).contains(v)));
        assert_eq!(
            batstrip_result_best_position(result, position.as_mut_ptr(), 2),
            BatstripStatus::InvalidInput
        );

        let iterations = batstrip_result_iterations(result);
        assert_eq!(batstrip_result_history_len(result), iterations);
        let mut recorded = f64::NAN;
        assert_eq!(
            batstrip_result_history_fitness(result, 0, &mut recorded),
            BatstripStatus::Ok
        );
        assert!(recorded.is_finite());
        assert_eq!(
            batstrip_result_history_fitness(result, iterations, &mut recorded),
            BatstripStatus::InvalidInput
        );
        if batstrip_result_reached_tolerance(result) {
            assert!(fitness <= 1e-3);
        } else {
            assert_eq!(iterations, 60);
        }

        batstrip_result_free(result);
        batstrip_params_free(params);
    }
}

#[test]
fn design_runs_are_deterministic() {
    let run_once = || unsafe {
        let params = batstrip_params_new();
        batstrip_params_set_max_iter(params, 40);
        let mut result: *mut BatstripResult = ptr::null_mut();
        let status =
            batstrip_design_run(params, 0.2, 3.9, ptr::null(), ptr::null(), 5, &mut result);
        assert_eq!(status, BatstripStatus::Ok);
        let mut position = [0.0f64; 3];
        batstrip_result_best_position(result, position.as_mut_ptr(), 3);
        let fitness = batstrip_result_best_fitness(result);
        batstrip_result_free(result);
        batstrip_params_free(params);
        (fitness, position)
    };
    assert_eq!(run_once(), run_once());
}

#[test]
fn design_run_accepts_custom_bounds_and_rejects_bad_ones() {
    unsafe {
        let params = batstrip_params_new();
        batstrip_params_set_max_iter(params, 20);

        let lower = [1.0f64, 1.0, 1.0];
        let upper = [10.0f64, 10.0, 10.0];
        let mut result: *mut BatstripResult = ptr::null_mut();
        let status = batstrip_design_run(
            params,
            0.2,
            3.9,
            lower.as_ptr(),
            upper.as_ptr(),
            2,
            &mut result,
        );
        assert_eq!(status, BatstripStatus::Ok);
        let mut position = [0.0f64; 3];
        batstrip_result_best_position(result, position.as_mut_ptr(), 3);
        assert!(position.iter().all(|v| (1.0..=10.0).contains(v)));
        batstrip_result_free(result);

        let inverted = [20.0f64, 20.0, 20.0];
        let mut result: *mut BatstripResult = ptr::null_mut();
        assert_eq!(
            batstrip_design_run(
                params,
                0.2,
                3.9,
                inverted.as_ptr(),
                upper.as_ptr(),
                2,
                &mut result,
            ),
            BatstripStatus::InvalidInput
        );
        assert_eq!(
            batstrip_design_run(
                params,
                0.2,
                3.9,
                lower.as_ptr(),
                ptr::null(),
                2,
                &mut result
            ),
            BatstripStatus::NullPointer
        );
        assert_eq!(
            batstrip_design_run(params, 0.2, 7.0, ptr::null(), ptr::null(), 2, &mut result),
            BatstripStatus::InvalidInput
        );
        batstrip_params_free(params);
    }
}

#[test]
fn invalid_parameters_fail_at_run_time() {
    unsafe {
        let params = batstrip_params_new();
        assert_eq!(batstrip_params_set_alpha(params, 1.5), BatstripStatus::Ok);
        let mut result: *mut BatstripResult = ptr::null_mut();
        assert_eq!(
            batstrip_design_run(params, 0.2, 3.9, ptr::null(), ptr::null(), 0, &mut result),
            BatstripStatus::InvalidInput
        );
        assert!(result.is_null());
        batstrip_params_free(params);
    }
}

#[test]
fn bench_run_and_lookup_errors() {
    unsafe {
        let params = batstrip_params_new();
        batstrip_params_set_max_iter(params, 20);

        let sphere = CString::new("sphere").unwrap();
        let mut result: *mut BatstripResult = ptr::null_mut();
        let status = batstrip_bench_run(params, sphere.as_ptr(), 5, 3, &mut result);
        assert_eq!(status, BatstripStatus::Ok);
        assert_eq!(batstrip_result_dims(result), 5);
        assert!(batstrip_result_best_fitness(result) >= 0.0);
        batstrip_result_free(result);

        let unknown = CString::new("nosuch").unwrap();
        let mut result: *mut BatstripResult = ptr::null_mut();
        assert_eq!(
            batstrip_bench_run(params, unknown.as_ptr(), 5, 3, &mut result),
            BatstripStatus::InvalidInput
        );
        assert_eq!(
            batstrip_bench_run(params, ptr::null(), 5, 3, &mut result),
            BatstripStatus::NullPointer
        );
        batstrip_params_free(params);
    }
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        batstrip_params_free(ptr::null_mut());
        batstrip_result_free(ptr::null_mut());
        assert!(batstrip_result_best_fitness(ptr::null()).is_nan());
        assert_eq!(batstrip_result_iterations(ptr::null()), 0);
        assert_eq!(batstrip_result_dims(ptr::null()), 0);
        assert_eq!(batstrip_result_history_len(ptr::null()), 0);
        assert!(!batstrip_result_reached_tolerance(ptr::null()));
        assert_eq!(
            batstrip_params_set_pop_size(ptr::null_mut(), 5),
            BatstripStatus::NullPointer
        );
        let mut out = 0.0f64;
        assert_eq!(
            batstrip_result_history_fitness(ptr::null(), 0, &mut out),
            BatstripStatus::NullPointer
        );
    }
}

#[test]
fn version_is_a_static_c_string() {
    let version = unsafe { CStr::from_ptr(batstrip_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_covers_the_surface() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/batstrip.h");
    let text = std::fs::read_to_string(header).expect("header should be generated by the build");
    for symbol in [
        "batstrip_analyze",
        "batstrip_params_new",
        "batstrip_params_set_tol",
        "batstrip_design_run",
        "batstrip_bench_run",
        "batstrip_result_best_position",
        "batstrip_result_free",
        "batstrip_version",
        "typedef struct BatstripParams BatstripParams;",
        "typedef struct BatstripResult BatstripResult;",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }
}
