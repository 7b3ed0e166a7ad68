//! Exercise the C surface the way a foreign caller would: handles, status
//! codes, flat arrays, and the generated header.

use krlab_ffi::*;

#[test]
fn ensemble_lifecycle_and_density() {
    unsafe {
        let mut handle: *mut KrlabEnsemble = std::ptr::null_mut();
        let status =
            krlab_ensemble_new(1, 10, KrlabField::Complex, KrlabMode::Critical, &mut handle);
        assert_eq!(status, KrlabStatus::Ok);
        assert!(!handle.is_null());

        let mut out = 0.0f64;
        let status = krlab_density(handle, [0.0].as_ptr(), [0.0].as_ptr(), 1, &mut out);
        assert_eq!(status, KrlabStatus::Ok);
        assert!((out - 5.729577951308232).abs() < 1e-10);

        krlab_ensemble_free(handle);
    }
}

#[test]
fn invalid_spec_is_rejected() {
    unsafe {
        let mut handle: *mut KrlabEnsemble = std::ptr::null_mut();
        // critical mode needs degree >= 2
        let status = krlab_ensemble_new(1, 1, KrlabField::Real, KrlabMode::Critical, &mut handle);
        assert_eq!(status, KrlabStatus::InvalidArgument);
        assert!(handle.is_null());
        // m = 0
        let status = krlab_ensemble_new(0, 5, KrlabField::Real, KrlabMode::Zeros, &mut handle);
        assert_eq!(status, KrlabStatus::InvalidArgument);
    }
}

#[test]
fn null_pointers_are_status_coded() {
    unsafe {
        assert_eq!(
            krlab_ensemble_new(
                1,
                5,
                KrlabField::Real,
                KrlabMode::Zeros,
                std::ptr::null_mut()
            ),
            KrlabStatus::NullPointer
        );
        let mut out = 0.0f64;
        assert_eq!(
            krlab_density(
                std::ptr::null(),
                [0.0].as_ptr(),
                [0.0].as_ptr(),
                1,
                &mut out
            ),
            KrlabStatus::NullPointer
        );
        assert_eq!(
            krlab_lambda_z(std::ptr::null(), [0.0].as_ptr(), 1, &mut out),
            KrlabStatus::NullPointer
        );
    }
}

#[test]
fn degenerate_real_locus_status() {
    unsafe {
        let mut handle: *mut KrlabEnsemble = std::ptr::null_mut();
        krlab_ensemble_new(1, 10, KrlabField::Real, KrlabMode::Critical, &mut handle);
        let mut out = 0.0f64;
        let status = krlab_density(handle, [0.5].as_ptr(), [0.0].as_ptr(), 1, &mut out);
        assert_eq!(status, KrlabStatus::DegenerateCovariance);
        krlab_ensemble_free(handle);
    }
}

#[test]
fn dimension_mismatch_status() {
    unsafe {
        let mut handle: *mut KrlabEnsemble = std::ptr::null_mut();
        krlab_ensemble_new(2, 5, KrlabField::Complex, KrlabMode::Zeros, &mut handle);
        let mut out = 0.0f64;
        let status = krlab_density(handle, [0.0].as_ptr(), [0.0].as_ptr(), 1, &mut out);
        assert_eq!(status, KrlabStatus::DimensionMismatch);
        krlab_ensemble_free(handle);
    }
}

#[test]
fn closed_forms_through_c_surface() {
    unsafe {
        let mut out = 0.0f64;
        assert_eq!(
            krlab_su2_crit_density(10, 0.0, 0.0, &mut out),
            KrlabStatus::Ok
        );
        assert!((out - 5.729577951308232).abs() < 1e-12);

        assert_eq!(
            krlab_su_zero_density(2, 5, [0.0, 0.0].as_ptr(), [0.0, 0.0].as_ptr(), 2, &mut out),
            KrlabStatus::Ok
        );
        assert!((out - 5.066059182116889).abs() < 1e-12);

        assert_eq!(
            krlab_so2_crit_density(10, 0.5, 0.0, &mut out),
            KrlabStatus::InvalidArgument
        );
        assert_eq!(
            krlab_so2_crit_density(10, 0.0, 0.5, &mut out),
            KrlabStatus::Ok
        );
        assert!(out.is_finite());

        assert_eq!(krlab_near_real_slope(0.0, &mut out), KrlabStatus::Ok);
        assert!((out - 0.6752372371178297).abs() < 1e-14);

        let mut value = 0.0;
        let mut cx = 0.0;
        let mut err = 0.0;
        assert_eq!(
            krlab_scaled_crit_density(KrlabField::Complex, 0.0, 0.0, &mut value, &mut cx, &mut err),
            KrlabStatus::Ok
        );
        assert!((value - std::f64::consts::FRAC_2_PI).abs() < 1e-14);
        assert_eq!(err, 0.0);
    }
}

#[test]
fn lambda_and_ratio() {
    unsafe {
        let mut rate = 0.0f64;
        assert_eq!(
            krlab_lambda_z([0.0].as_ptr(), [0.5].as_ptr(), 1, &mut rate),
            KrlabStatus::Ok
        );
        assert!((rate - 0.5108256237659907).abs() < 1e-14);

        let mut ratio = 0.0f64;
        assert_eq!(
            krlab_density_ratio(
                1,
                10,
                KrlabMode::Critical,
                [0.0].as_ptr(),
                [0.99].as_ptr(),
                1,
                &mut ratio
            ),
            KrlabStatus::Ok
        );
        assert!((ratio - 1.0).abs() < 1e-6);
    }
}

#[test]
fn decay_fit_through_c_surface() {
    unsafe {
        let degrees: Vec<u32> = (10..=30).collect();
        let mut fitted = 0.0f64;
        let mut theoretical = 0.0f64;
        let status = krlab_decay_rate_fit(
            1,
            KrlabMode::Critical,
            [0.5].as_ptr(),
            [0.5].as_ptr(),
            1,
            degrees.as_ptr(),
            degrees.len(),
            &mut fitted,
            &mut theoretical,
        );
        assert_eq!(status, KrlabStatus::Ok);
        assert!((theoretical - 0.29389333245105953).abs() < 1e-12);
        assert!(fitted.is_finite() && fitted > 0.0);

        // unresolvable case propagates its status
        let status = krlab_decay_rate_fit(
            1,
            KrlabMode::Critical,
            [0.0].as_ptr(),
            [0.99].as_ptr(),
            1,
            degrees.as_ptr(),
            11,
            &mut fitted,
            &mut theoretical,
        );
        assert_eq!(status, KrlabStatus::RateUnresolvable);
    }
}

#[test]
fn status_messages_are_static_c_strings() {
    for status in [
        KrlabStatus::Ok,
        KrlabStatus::NullPointer,
        KrlabStatus::InvalidArgument,
        KrlabStatus::DegenerateCovariance,
        KrlabStatus::NonFinite,
        KrlabStatus::RateUnresolvable,
        KrlabStatus::RootFindFailed,
        KrlabStatus::DimensionMismatch,
    ] {
        let ptr = krlab_status_message(status);
        assert!(!ptr.is_null());
        let text = unsafe { std::ffi::CStr::from_ptr(ptr) }.to_str().unwrap();
        assert!(!text.is_empty());
    }
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/krlab.h"))
        .expect("header generated at build time");
    for symbol in [
        "KRLAB_H",
        "typedef struct KrlabEnsemble KrlabEnsemble",
        "krlab_ensemble_new",
        "krlab_ensemble_free",
        "krlab_density",
        "krlab_density_ratio",
        "krlab_lambda_z",
        "krlab_su2_crit_density",
        "krlab_so2_crit_density",
        "krlab_su_zero_density",
        "krlab_scaled_crit_density",
        "krlab_near_real_slope",
        "krlab_decay_rate_fit",
        "krlab_status_message",
    ] {
        assert!(header.contains(symbol), "header missing '{symbol}'");
    }
}
