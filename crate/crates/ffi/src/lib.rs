//! C ABI over the `superconic` library.
//!
//! Every function returns an [`ScStatus`]; on failure a description is kept
//! per thread and can be read with [`sc_last_error_message`]. Output
//! pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use superconic::{branch_plan, conic_sag, BranchPlan, ConicParams, Error, Region};

/// Result codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    InvalidInput = 1,
    Degenerate = 2,
    NullPointer = 3,
    OutOfRange = 4,
    EvaluationFailed = 5,
    BranchPlanFailed = 6,
    Panic = 7,
}

/// Branch-planned oval, created by [`sc_oval_create`].
pub struct ScOval {
    plan: BranchPlan,
}

/// Region codes used in [`ScSample::region`].
pub const SC_REGION_EXACT: i32 = 0;
pub const SC_REGION_INTERPOLATED: i32 = 1;

/// One evaluated point of the profile.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScSample {
    pub z: f64,
    /// `SC_REGION_EXACT` or `SC_REGION_INTERPOLATED`.
    pub region: i32,
    pub lambda: f64,
    pub one_minus_ab: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> ScStatus {
    match e {
        Error::InvalidInput { .. } => ScStatus::InvalidInput,
        Error::Degenerate(_) | Error::DegenerateCubic => ScStatus::Degenerate,
        Error::OutOfRange { .. } => ScStatus::OutOfRange,
        Error::BranchPlanFailure { .. } | Error::DiscRootAnomaly { .. } => ScStatus::BranchPlanFailed,
        _ => ScStatus::EvaluationFailed,
    }
}

fn fail(e: Error) -> ScStatus {
    set_last_error(e.to_string());
    status_of(&e)
}

fn null(name: &str) -> ScStatus {
    set_last_error(format!("null pointer passed as `{name}`"));
    ScStatus::NullPointer
}

fn guard(f: impl FnOnce() -> ScStatus) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            ScStatus::Panic
        }
    }
}

unsafe fn oval_ref<'a>(h: *const ScOval) -> Option<&'a ScOval> {
    h.as_ref()
}

/// Validates the parameters and builds the branch plan over `[0, y_max]`.
///
/// # Safety
/// `out` must be null or point to writable storage for one pointer. The
/// handle must be released with [`sc_oval_destroy`].
#[no_mangle]
pub unsafe extern "C" fn sc_oval_create(
    m: f64,
    eta_i: f64,
    eta_o: f64,
    epsilon: f64,
    y_max: f64,
    out: *mut *mut ScOval,
) -> ScStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let plan = match superconic::validate_params(m, eta_i, eta_o, epsilon).and_then(|p| branch_plan(&p, y_max)) {
            Ok(plan) => plan,
            Err(e) => return fail(e),
        };
        *out = Box::into_raw(Box::new(ScOval { plan }));
        ScStatus::Ok
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must be null or a handle from [`sc_oval_create`] not yet destroyed.
#[no_mangle]
pub unsafe extern "C" fn sc_oval_destroy(h: *mut ScOval) {
    if !h.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(h))));
    }
}

/// Evaluates the profile at `y` (`|y| <= y_max`).
///
/// # Safety
/// `h` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sc_oval_evaluate(h: *const ScOval, y: f64, out: *mut ScSample) -> ScStatus {
    guard(|| {
        let Some(oval) = oval_ref(h) else { return null("h") };
        if out.is_null() {
            return null("out");
        }
        match oval.plan.evaluate(y) {
            Ok(r) => {
                *out = ScSample {
                    z: r.z,
                    region: match r.region {
                        Region::Exact => SC_REGION_EXACT,
                        Region::Interpolated => SC_REGION_INTERPOLATED,
                    },
                    lambda: r.lambda,
                    one_minus_ab: r.one_minus_ab,
                };
                ScStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Profile plus aspheric terms `sum f[n] y^(2n+4)`.
///
/// # Safety
/// `h` must be a live handle; `f` must point to `n` doubles (or be null
/// with `n == 0`); `out_z` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sc_oval_evaluate_superconic(
    h: *const ScOval,
    f: *const f64,
    n: usize,
    y: f64,
    out_z: *mut f64,
) -> ScStatus {
    guard(|| {
        let Some(oval) = oval_ref(h) else { return null("h") };
        if out_z.is_null() {
            return null("out_z");
        }
        let coeffs: &[f64] = match (f.is_null(), n) {
            (_, 0) => &[],
            (true, _) => return null("f"),
            (false, n) => std::slice::from_raw_parts(f, n),
        };
        match oval.plan.superconic_evaluate(coeffs, y) {
            Ok(z) => {
                *out_z = z;
                ScStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Vertex curvature `c0` of the oval.
///
/// # Safety
/// `h` must be a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sc_oval_curvature(h: *const ScOval, out: *mut f64) -> ScStatus {
    guard(|| {
        let Some(oval) = oval_ref(h) else { return null("h") };
        if out.is_null() {
            return null("out");
        }
        *out = oval.plan.params().c0();
        ScStatus::Ok
    })
}

/// Writes up to `cap` joint positions to `out` and the total count to
/// `count`. Pass `cap == 0` to query the count.
///
/// # Safety
/// `h` must be a live handle; `out` must hold `cap` doubles (may be null
/// when `cap == 0`); `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_oval_joints(h: *const ScOval, out: *mut f64, cap: usize, count: *mut usize) -> ScStatus {
    guard(|| {
        let Some(oval) = oval_ref(h) else { return null("h") };
        if count.is_null() {
            return null("count");
        }
        if out.is_null() && cap > 0 {
            return null("out");
        }
        let joints = oval.plan.joints();
        for (i, j) in joints.iter().take(cap).enumerate() {
            *out.add(i) = j.y;
        }
        *count = joints.len();
        ScStatus::Ok
    })
}

/// Sag of the conic with curvature `c0` and conic constant `k`.
///
/// # Safety
/// `out_z` must be writable; `out_region` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sc_conic_sag(c0: f64, k: f64, y: f64, out_z: *mut f64, out_region: *mut i32) -> ScStatus {
    guard(|| {
        if out_z.is_null() {
            return null("out_z");
        }
        let c = match ConicParams::new(c0, k) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        if !y.is_finite() {
            return fail(Error::InvalidInput { field: "y", value: y });
        }
        let (z, region) = conic_sag(&c, y);
        *out_z = z;
        if !out_region.is_null() {
            *out_region = match region {
                Region::Exact => SC_REGION_EXACT,
                Region::Interpolated => SC_REGION_INTERPOLATED,
            };
        }
        ScStatus::Ok
    })
}

/// Static description of a status code; unknown codes get a generic text.
#[no_mangle]
pub extern "C" fn sc_status_message(status: i32) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"invalid input\0",
        2 => b"degenerate parameters\0",
        3 => b"null pointer\0",
        4 => b"out of range\0",
        5 => b"evaluation failed\0",
        6 => b"branch plan failed\0",
        7 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
