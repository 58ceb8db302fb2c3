//! C ABI over `mlyap`.
//!
//! Sets and certificates are opaque heap handles owned by the caller and
//! released with the matching `_free` function. Every fallible call returns a
//! [`MlyapStatus`]; on failure a message is available from
//! [`mlyap_last_error`] on the same thread until the next failing call.
//! Panics are caught at the boundary and reported as `MLYAP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mlyap::mlf::{construct_max, construct_sum, MlfCertificate};
use mlyap::numerics::spectral_radius;
use mlyap::{Error, ErrorClass, Matrix, SetExpr, Tolerances};

/// Result codes. Values 2–4 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlyapStatus {
    Ok = 0,
    NullPointer = 1,
    Input = 2,
    Precondition = 3,
    Numerical = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlyapForm {
    Max = 0,
    Sum = 1,
}

/// Opaque set description.
pub struct MlyapSet(SetExpr);

/// Opaque Minkowski–Lyapunov certificate.
pub struct MlyapCertificate(MlfCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> MlyapStatus {
    let status = match e.class() {
        ErrorClass::Input => MlyapStatus::Input,
        ErrorClass::Precondition => MlyapStatus::Precondition,
        ErrorClass::Numerical => MlyapStatus::Numerical,
    };
    set_error(e.to_string());
    status
}

fn guard<F: FnOnce() -> Result<(), MlyapStatus>>(f: F) -> MlyapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MlyapStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            MlyapStatus::Panic
        }
    }
}

fn null(what: &str) -> MlyapStatus {
    set_error(format!("null pointer: {what}"));
    MlyapStatus::NullPointer
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], MlyapStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn square_matrix(data: *const f64, n: usize) -> Result<Matrix, MlyapStatus> {
    let d = slice(data, n.checked_mul(n).ok_or(MlyapStatus::Input)?, "matrix")?;
    Matrix::new(n, n, d.to_vec()).map_err(fail)
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, MlyapStatus> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(Error::Parse(format!("{what} is not UTF-8"))))
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mlyap_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mlyap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Spectral radius of the row-major `n × n` matrix `data`.
///
/// # Safety
/// `data` must point to `n*n` doubles and `out` to one writable double.
#[no_mangle]
pub unsafe extern "C" fn mlyap_spectral_radius(data: *const f64, n: usize, out: *mut f64) -> MlyapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = square_matrix(data, n)?;
        *out = spectral_radius(&a, Tolerances::default().eigen).map_err(fail)?;
        Ok(())
    })
}

/// Parse a set description (same JSON as the command line).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mlyap_set_from_json(json: *const c_char, out: *mut *mut MlyapSet) -> MlyapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s: SetExpr = serde_json::from_str(text(json, "json")?).map_err(|e| fail(Error::Parse(e.to_string())))?;
        *out = Box::into_raw(Box::new(MlyapSet(s)));
        Ok(())
    })
}

/// # Safety
/// `set` must come from [`mlyap_set_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mlyap_set_free(set: *mut MlyapSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlyap_set_dim(set: *const MlyapSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.dim())
}

/// Gauge of `set` at the `n`-vector `x`.
///
/// # Safety
/// `set` must be a live handle, `x` must point to `n` doubles, `out` to one.
#[no_mangle]
pub unsafe extern "C" fn mlyap_set_gauge(set: *const MlyapSet, x: *const f64, n: usize, out: *mut f64) -> MlyapStatus {
    guard(|| {
        let s = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.0.gauge(slice(x, n, "x")?).map_err(fail)?;
        Ok(())
    })
}

/// Support function of `set` in the direction `y`.
///
/// # Safety
/// As for [`mlyap_set_gauge`].
#[no_mangle]
pub unsafe extern "C" fn mlyap_set_support(set: *const MlyapSet, y: *const f64, n: usize, out: *mut f64) -> MlyapStatus {
    guard(|| {
        let s = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.0.support(slice(y, n, "y")?).map_err(fail)?;
        Ok(())
    })
}

/// Construct a certificate for the row-major `n × n` matrix `a` over `q`.
/// A NaN `gamma` selects the default `(ρ(A)+1)/2`.
///
/// # Safety
/// `a` must point to `n*n` doubles, `q` must be a live handle and `out` a
/// writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mlyap_certificate_construct(
    a: *const f64,
    n: usize,
    q: *const MlyapSet,
    form: MlyapForm,
    gamma: f64,
    cap: usize,
    out: *mut *mut MlyapCertificate,
) -> MlyapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let q = q.as_ref().ok_or_else(|| null("q"))?;
        let a = square_matrix(a, n)?;
        let gamma = (!gamma.is_nan()).then_some(gamma);
        let cert = match form {
            MlyapForm::Max => construct_max(&a, &q.0, gamma, cap),
            MlyapForm::Sum => construct_sum(&a, &q.0, gamma, cap),
        }
        .map_err(fail)?;
        *out = Box::into_raw(Box::new(MlyapCertificate(cert)));
        Ok(())
    })
}

/// Parse a certificate from its JSON form.
///
/// # Safety
/// `json` must be nul-terminated and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mlyap_certificate_from_json(
    json: *const c_char,
    out: *mut *mut MlyapCertificate,
) -> MlyapStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let c: MlfCertificate =
            serde_json::from_str(text(json, "json")?).map_err(|e| fail(Error::Parse(e.to_string())))?;
        *out = Box::into_raw(Box::new(MlyapCertificate(c)));
        Ok(())
    })
}

/// Serialize a certificate; release the string with [`mlyap_string_free`].
///
/// # Safety
/// `cert` must be a live handle and `out` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mlyap_certificate_to_json(cert: *const MlyapCertificate, out: *mut *mut c_char) -> MlyapStatus {
    guard(|| {
        let c = cert.as_ref().ok_or_else(|| null("cert"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = serde_json::to_string(&c.0).map_err(|e| fail(Error::from(e)))?;
        *out = CString::new(s).expect("JSON has no nul bytes").into_raw();
        Ok(())
    })
}

/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlyap_certificate_free(cert: *mut MlyapCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Certified power `k`, or 0 for a null handle.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlyap_certificate_k(cert: *const MlyapCertificate) -> usize {
    cert.as_ref().map_or(0, |c| c.0.k)
}

/// Contraction factor, or NaN for a null handle.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlyap_certificate_gamma(cert: *const MlyapCertificate) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.gamma)
}

/// Value of the Lyapunov function at `x`.
///
/// # Safety
/// `cert` must be a live handle, `x` must point to `n` doubles, `out` to one.
#[no_mangle]
pub unsafe extern "C" fn mlyap_certificate_eval(
    cert: *const MlyapCertificate,
    x: *const f64,
    n: usize,
    out: *mut f64,
) -> MlyapStatus {
    guard(|| {
        let c = cert.as_ref().ok_or_else(|| null("cert"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c.0.eval(slice(x, n, "x")?).map_err(fail)?;
        Ok(())
    })
}

/// Largest sampled violation of the decrease inequality.
///
/// # Safety
/// `cert` must be a live handle and `max_violation` one writable double.
#[no_mangle]
pub unsafe extern "C" fn mlyap_certificate_verify(
    cert: *const MlyapCertificate,
    samples: usize,
    seed: u64,
    max_violation: *mut f64,
) -> MlyapStatus {
    guard(|| {
        let c = cert.as_ref().ok_or_else(|| null("cert"))?;
        if max_violation.is_null() {
            return Err(null("max_violation"));
        }
        *max_violation = c.0.verify_inequality(samples, seed).map_err(fail)?.max_violation;
        Ok(())
    })
}
