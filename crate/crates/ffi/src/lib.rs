//! C ABI for the density library: opaque ensemble handles, status codes,
//! and flat-array complex points, so other languages can bind without Rust
//! types. The header is generated into `include/krlab.h` at build time.

use krlab::closedform::{
    near_real_slope, scaled_crit_density, so2_crit_density, su2_crit_density, su_zero_density,
    ScaledField,
};
use krlab::ensemble::{EnsembleSpec, Field, Mode};
use krlab::kacrice::{decay_rate_fit, density, density_ratio, lambda_z};
use krlab::KrError;
use num_complex::Complex64;
use std::os::raw::c_char;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Constraint covariance singular (real coefficients on or near ℝ^m).
    DegenerateCovariance = 3,
    NonFinite = 4,
    /// Density gap below the floating floor over the whole degree range.
    RateUnresolvable = 5,
    RootFindFailed = 6,
    DimensionMismatch = 7,
}

impl From<&KrError> for KrlabStatus {
    fn from(e: &KrError) -> Self {
        match e {
            KrError::InvalidArgument(_) => KrlabStatus::InvalidArgument,
            KrError::DegenerateCovariance(_) => KrlabStatus::DegenerateCovariance,
            KrError::NonFinite(_) => KrlabStatus::NonFinite,
            KrError::RateUnresolvable(_) => KrlabStatus::RateUnresolvable,
            KrError::RootFindFailure { .. } | KrError::ExcessiveFailureRate { .. } => {
                KrlabStatus::RootFindFailed
            }
            KrError::DimensionMismatch { .. } => KrlabStatus::DimensionMismatch,
        }
    }
}

/// Coefficient field of the ensemble.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrlabField {
    Real = 0,
    Complex = 1,
}

impl KrlabField {
    fn to_field(self) -> Field {
        match self {
            KrlabField::Real => Field::Real,
            KrlabField::Complex => Field::Complex,
        }
    }
}

/// Point process selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrlabMode {
    Zeros = 0,
    Critical = 1,
}

impl KrlabMode {
    fn to_mode(self) -> Mode {
        match self {
            KrlabMode::Zeros => Mode::Zeros,
            KrlabMode::Critical => Mode::Critical,
        }
    }
}

/// Opaque ensemble specification handle.
pub struct KrlabEnsemble {
    spec: EnsembleSpec,
}

/// Gather a complex point from flat re/im arrays.
///
/// # Safety
/// `z_re` and `z_im` must point to `len` readable f64 values.
unsafe fn gather_point(z_re: *const f64, z_im: *const f64, len: usize) -> Option<Vec<Complex64>> {
    if z_re.is_null() || z_im.is_null() || len == 0 {
        return None;
    }
    let re = std::slice::from_raw_parts(z_re, len);
    let im = std::slice::from_raw_parts(z_im, len);
    Some(
        re.iter()
            .zip(im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect(),
    )
}

/// Create an ensemble handle. On success `*out` owns the handle; release it
/// with `krlab_ensemble_free`.
///
/// # Safety
/// `out` must be a valid pointer to a pointer slot.
#[no_mangle]
pub unsafe extern "C" fn krlab_ensemble_new(
    m: u32,
    degree: u32,
    field: KrlabField,
    mode: KrlabMode,
    out: *mut *mut KrlabEnsemble,
) -> KrlabStatus {
    if out.is_null() {
        return KrlabStatus::NullPointer;
    }
    match EnsembleSpec::new(m as usize, degree, field.to_field(), mode.to_mode()) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(KrlabEnsemble { spec }));
            KrlabStatus::Ok
        }
        Err(e) => {
            *out = std::ptr::null_mut();
            KrlabStatus::from(&e)
        }
    }
}

/// Release a handle created by `krlab_ensemble_new`. Null is a no-op.
///
/// # Safety
/// `ensemble` must be null or a pointer previously returned by
/// `krlab_ensemble_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn krlab_ensemble_free(ensemble: *mut KrlabEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

/// Expected density of the ensemble's point process at z ∈ ℂ^m, given as
/// flat re/im arrays of length m.
///
/// # Safety
/// `ensemble` must be a live handle; array and out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn krlab_density(
    ensemble: *const KrlabEnsemble,
    z_re: *const f64,
    z_im: *const f64,
    len: usize,
    out_density: *mut f64,
) -> KrlabStatus {
    if ensemble.is_null() || out_density.is_null() {
        return KrlabStatus::NullPointer;
    }
    let Some(z) = gather_point(z_re, z_im, len) else {
        return KrlabStatus::NullPointer;
    };
    let spec = &(*ensemble).spec;
    if z.len() != spec.m() {
        return KrlabStatus::DimensionMismatch;
    }
    match density(spec, &z) {
        Ok(r) => {
            *out_density = r.density;
            KrlabStatus::Ok
        }
        Err(e) => KrlabStatus::from(&e),
    }
}

/// Real-field over complex-field density ratio at identical parameters.
///
/// # Safety
/// Array and out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn krlab_density_ratio(
    m: u32,
    degree: u32,
    mode: KrlabMode,
    z_re: *const f64,
    z_im: *const f64,
    len: usize,
    out_ratio: *mut f64,
) -> KrlabStatus {
    if out_ratio.is_null() {
        return KrlabStatus::NullPointer;
    }
    let Some(z) = gather_point(z_re, z_im, len) else {
        return KrlabStatus::NullPointer;
    };
    if z.len() != m as usize {
        return KrlabStatus::DimensionMismatch;
    }
    match density_ratio(m as usize, degree, mode.to_mode(), &z) {
        Ok(r) => {
            *out_ratio = r;
            KrlabStatus::Ok
        }
        Err(e) => KrlabStatus::from(&e),
    }
}

/// Exponential rate λ_z = −log|(1 + z·z)/(1 + ‖z‖²)|; +∞ where 1 + z·z = 0.
///
/// # Safety
/// Array and out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn krlab_lambda_z(
    z_re: *const f64,
    z_im: *const f64,
    len: usize,
    out_rate: *mut f64,
) -> KrlabStatus {
    if out_rate.is_null() {
        return KrlabStatus::NullPointer;
    }
    let Some(z) = gather_point(z_re, z_im, len) else {
        return KrlabStatus::NullPointer;
    };
    *out_rate = lambda_z(&z);
    KrlabStatus::Ok
}

/// Exact SU(2) critical-point density at z = re + i·im.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn krlab_su2_crit_density(
    degree: u32,
    re: f64,
    im: f64,
    out: *mut f64,
) -> KrlabStatus {
    if out.is_null() {
        return KrlabStatus::NullPointer;
    }
    if degree < 2 {
        return KrlabStatus::InvalidArgument;
    }
    *out = su2_crit_density(degree, Complex64::new(re, im));
    KrlabStatus::Ok
}

/// Exact SO(2) critical-point density (complex density plus error term);
/// fails on the real axis.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn krlab_so2_crit_density(
    degree: u32,
    re: f64,
    im: f64,
    out: *mut f64,
) -> KrlabStatus {
    if out.is_null() {
        return KrlabStatus::NullPointer;
    }
    match so2_crit_density(degree, Complex64::new(re, im)) {
        Ok(v) => {
            *out = v;
            KrlabStatus::Ok
        }
        Err(e) => KrlabStatus::from(&e),
    }
}

/// Zero density of the m-component complex system at z ∈ ℂ^m.
///
/// # Safety
/// Array and out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn krlab_su_zero_density(
    m: u32,
    degree: u32,
    z_re: *const f64,
    z_im: *const f64,
    len: usize,
    out: *mut f64,
) -> KrlabStatus {
    if out.is_null() {
        return KrlabStatus::NullPointer;
    }
    let Some(z) = gather_point(z_re, z_im, len) else {
        return KrlabStatus::NullPointer;
    };
    if z.len() != m as usize || m == 0 || degree == 0 {
        return KrlabStatus::InvalidArgument;
    }
    *out = su_zero_density(m as usize, degree, &z);
    KrlabStatus::Ok
}

/// Scaling-limit critical-point density; splits the value into the complex
/// component and the real-field correction (zero for the complex field).
///
/// # Safety
/// Out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn krlab_scaled_crit_density(
    field: KrlabField,
    re: f64,
    im: f64,
    out_value: *mut f64,
    out_cx: *mut f64,
    out_err: *mut f64,
) -> KrlabStatus {
    if out_value.is_null() || out_cx.is_null() || out_err.is_null() {
        return KrlabStatus::NullPointer;
    }
    let sf = match field {
        KrlabField::Real => ScaledField::Real,
        KrlabField::Complex => ScaledField::Complex,
    };
    match scaled_crit_density(sf, Complex64::new(re, im)) {
        Ok(s) => {
            *out_value = s.value;
            *out_cx = s.component_cx;
            *out_err = s.component_err;
            KrlabStatus::Ok
        }
        Err(e) => KrlabStatus::from(&e),
    }
}

/// Linear-in-y slope of the scaled real density near the real axis.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn krlab_near_real_slope(x: f64, out: *mut f64) -> KrlabStatus {
    if out.is_null() {
        return KrlabStatus::NullPointer;
    }
    *out = near_real_slope(x);
    KrlabStatus::Ok
}

/// Fit the decay rate of |density_real − density_cx| over a degree sweep.
/// `out_fitted` receives the envelope-fit rate, `out_theoretical` the λ_z
/// bound rate.
///
/// # Safety
/// Array and out pointers must be valid; `degrees` must hold `n_degrees`
/// values.
#[no_mangle]
pub unsafe extern "C" fn krlab_decay_rate_fit(
    m: u32,
    mode: KrlabMode,
    z_re: *const f64,
    z_im: *const f64,
    len: usize,
    degrees: *const u32,
    n_degrees: usize,
    out_fitted: *mut f64,
    out_theoretical: *mut f64,
) -> KrlabStatus {
    if out_fitted.is_null() || out_theoretical.is_null() || degrees.is_null() {
        return KrlabStatus::NullPointer;
    }
    let Some(z) = gather_point(z_re, z_im, len) else {
        return KrlabStatus::NullPointer;
    };
    if z.len() != m as usize {
        return KrlabStatus::DimensionMismatch;
    }
    let degrees = std::slice::from_raw_parts(degrees, n_degrees);
    match decay_rate_fit(m as usize, mode.to_mode(), &z, degrees) {
        Ok(fit) => {
            *out_fitted = fit.fitted_rate;
            *out_theoretical = fit.theoretical_rate;
            KrlabStatus::Ok
        }
        Err(e) => KrlabStatus::from(&e),
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn krlab_status_message(status: KrlabStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        KrlabStatus::Ok => b"ok\0",
        KrlabStatus::NullPointer => b"null pointer argument\0",
        KrlabStatus::InvalidArgument => b"invalid argument\0",
        KrlabStatus::DegenerateCovariance => b"degenerate covariance (real locus)\0",
        KrlabStatus::NonFinite => b"non-finite result\0",
        KrlabStatus::RateUnresolvable => b"decay rate unresolvable\0",
        KrlabStatus::RootFindFailed => b"root finding failed\0",
        KrlabStatus::DimensionMismatch => b"dimension mismatch\0",
    };
    msg.as_ptr() as *const c_char
}
