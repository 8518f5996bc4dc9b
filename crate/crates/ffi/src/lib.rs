//! C ABI over `cubelin`.
//!
//! Matrices cross the boundary as opaque [`CubelinMatrix`] handles. Every
//! fallible call returns a [`CubelinStatus`]; on failure a message is kept
//! per thread and can be read with [`cubelin_last_error_message`]. Strings
//! returned through `char **out` are owned by the caller and must be
//! released with [`cubelin_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cubelin::inversion::default_degree_bound;
use cubelin::{
    builtin_example, corollary_pipeline, decide_automorphism_with_bound, gz_reduce, is_keller, matrix_to_json,
    parse_matrix, rank_bound_certificate, run_search, ScalarMatrix, SearchConfig,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubelinStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    Unsupported = 5,
    /// The call completed and its output is valid, but it reports an anomaly.
    Anomaly = 6,
    Internal = 7,
}

/// Opaque square-or-rectangular matrix over `Q(i)`.
pub struct CubelinMatrix {
    inner: ScalarMatrix,
}

/// Rank-bound certificate, as filled by [`cubelin_verify`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CubelinCertificate {
    pub trace_condition_holds: bool,
    pub delta: usize,
    pub rank: usize,
    pub bound_times_two: usize,
    pub theorem_satisfied: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Failure(CubelinStatus, String);

type Outcome<T> = Result<T, Failure>;

fn fail<T>(status: CubelinStatus, message: impl Into<String>) -> Outcome<T> {
    Err(Failure(status, message.into()))
}

/// Runs `body`, records any error message and converts panics to `Internal`.
fn guard(body: impl FnOnce() -> Outcome<CubelinStatus>) -> CubelinStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {message}"));
            CubelinStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(text: *const c_char, what: &str) -> Outcome<&'a str> {
    if text.is_null() {
        return fail(CubelinStatus::NullPointer, format!("{what} is null"));
    }
    match CStr::from_ptr(text).to_str() {
        Ok(s) => Ok(s),
        Err(e) => fail(CubelinStatus::InvalidUtf8, format!("{what}: {e}")),
    }
}

unsafe fn read_matrix<'a>(m: *const CubelinMatrix) -> Outcome<&'a ScalarMatrix> {
    match m.as_ref() {
        Some(h) => Ok(&h.inner),
        None => fail(CubelinStatus::NullPointer, "matrix handle is null"),
    }
}

fn require_square(a: &ScalarMatrix) -> Outcome<()> {
    if a.is_square() && a.rows() > 0 {
        Ok(())
    } else {
        fail(CubelinStatus::InvalidInput, format!("expected a nonempty square matrix, got {}x{}", a.rows(), a.cols()))
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Outcome<()> {
    if out.is_null() {
        return fail(CubelinStatus::NullPointer, "output pointer is null");
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Outcome<()> {
    let c = CString::new(text).map_err(|e| Failure(CubelinStatus::Internal, e.to_string()))?;
    write_out(out, c.into_raw())
}

fn new_handle(inner: ScalarMatrix) -> *mut CubelinMatrix {
    Box::into_raw(Box::new(CubelinMatrix { inner }))
}

/// Parses a JSON array of rows of complex literals into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_matrix_parse(json: *const c_char, out: *mut *mut CubelinMatrix) -> CubelinStatus {
    guard(|| {
        if out.is_null() {
            return fail(CubelinStatus::NullPointer, "output pointer is null");
        }
        let text = read_str(json, "json")?;
        let m = parse_matrix(text).map_err(|e| Failure(CubelinStatus::ParseError, e.to_string()))?;
        write_out(out, new_handle(m))?;
        Ok(CubelinStatus::Ok)
    })
}

/// Loads a built-in example (`paper-example`, `shear-2`, `zero-3`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_matrix_example(name: *const c_char, out: *mut *mut CubelinMatrix) -> CubelinStatus {
    guard(|| {
        if out.is_null() {
            return fail(CubelinStatus::NullPointer, "output pointer is null");
        }
        let name = read_str(name, "name")?;
        let m = builtin_example(name).map_err(|e| Failure(CubelinStatus::InvalidInput, e.to_string()))?;
        write_out(out, new_handle(m))?;
        Ok(CubelinStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cubelin_matrix_free(m: *mut CubelinMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_matrix_dim(
    m: *const CubelinMatrix,
    rows: *mut usize,
    cols: *mut usize,
) -> CubelinStatus {
    guard(|| {
        let a = read_matrix(m)?;
        if rows.is_null() || cols.is_null() {
            return fail(CubelinStatus::NullPointer, "output pointer is null");
        }
        write_out(rows, a.rows())?;
        write_out(cols, a.cols())?;
        Ok(CubelinStatus::Ok)
    })
}

/// Canonical JSON form of the matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_matrix_to_json(m: *const CubelinMatrix, out: *mut *mut c_char) -> CubelinStatus {
    guard(|| {
        let a = read_matrix(m)?;
        write_string(out, matrix_to_json(a))?;
        Ok(CubelinStatus::Ok)
    })
}

/// Fills the rank-bound certificate. Returns `Anomaly` if the bound fails
/// under the trace condition.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_verify(m: *const CubelinMatrix, out: *mut CubelinCertificate) -> CubelinStatus {
    guard(|| {
        let a = read_matrix(m)?;
        require_square(a)?;
        let cert = rank_bound_certificate(a).map_err(|e| Failure(CubelinStatus::InvalidInput, e.to_string()))?;
        write_out(
            out,
            CubelinCertificate {
                trace_condition_holds: cert.trace_condition_holds,
                delta: cert.delta,
                rank: cert.rank,
                bound_times_two: cert.bound_times_two,
                theorem_satisfied: cert.theorem_satisfied,
            },
        )?;
        if cert.theorem_satisfied {
            Ok(CubelinStatus::Ok)
        } else {
            fail(CubelinStatus::Anomaly, "rank bound violated")
        }
    })
}

/// Nilpotency of the Jacobian of the cubic part.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_is_keller(m: *const CubelinMatrix, out: *mut bool) -> CubelinStatus {
    guard(|| {
        let a = read_matrix(m)?;
        require_square(a)?;
        write_out(out, is_keller(a))?;
        Ok(CubelinStatus::Ok)
    })
}

/// Decides invertibility and writes the result as JSON. `degree_bound = 0`
/// selects the default `3^(n-1)`. Returns `Anomaly` (with output) when a
/// Keller map is not inverted within the default bound.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_invert(
    m: *const CubelinMatrix,
    degree_bound: u32,
    out: *mut *mut c_char,
) -> CubelinStatus {
    guard(|| {
        let a = read_matrix(m)?;
        require_square(a)?;
        if out.is_null() {
            return fail(CubelinStatus::NullPointer, "output pointer is null");
        }
        let default = default_degree_bound(a.rows());
        let bound = if degree_bound == 0 { default } else { degree_bound };
        let result = decide_automorphism_with_bound(a, bound);
        write_string(out, serde_json::to_string(&result).expect("serializable"))?;
        if !result.is_invertible() && bound >= default && is_keller(a) {
            return fail(CubelinStatus::Anomaly, format!("Keller map not inverted within degree {bound}"));
        }
        Ok(CubelinStatus::Ok)
    })
}

/// Reduction to the paired map in dimension `rank(A)`, as JSON.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_reduce(m: *const CubelinMatrix, out: *mut *mut c_char) -> CubelinStatus {
    guard(|| {
        let a = read_matrix(m)?;
        require_square(a)?;
        let pair = gz_reduce(a).map_err(|e| Failure(CubelinStatus::InvalidInput, e.to_string()))?;
        write_string(out, serde_json::to_string(&pair).expect("serializable"))?;
        Ok(CubelinStatus::Ok)
    })
}

/// The nonzero-diagonal inversion pipeline for `n ≤ 9`, as JSON. Larger
/// matrices give `Unsupported`; a failed step gives `Anomaly` with output.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_corollary(m: *const CubelinMatrix, out: *mut *mut c_char) -> CubelinStatus {
    guard(|| {
        let a = read_matrix(m)?;
        require_square(a)?;
        if out.is_null() {
            return fail(CubelinStatus::NullPointer, "output pointer is null");
        }
        let report = corollary_pipeline(a).map_err(|e| match e {
            cubelin::PairingError::OutOfScope(_) => Failure(CubelinStatus::Unsupported, e.to_string()),
            other => Failure(CubelinStatus::InvalidInput, other.to_string()),
        })?;
        write_string(out, serde_json::to_string(&report).expect("serializable"))?;
        if report.is_anomaly() {
            return fail(CubelinStatus::Anomaly, report.anomaly.clone().unwrap_or_else(|| "pipeline failure".into()));
        }
        Ok(CubelinStatus::Ok)
    })
}

/// Runs a search from a JSON config and writes the summary JSON. A nonzero
/// `workers` overrides the config. Returns `Anomaly` (with output) if any
/// candidate is anomalous.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubelin_search(
    config_json: *const c_char,
    workers: usize,
    out: *mut *mut c_char,
) -> CubelinStatus {
    guard(|| {
        let text = read_str(config_json, "config_json")?;
        if out.is_null() {
            return fail(CubelinStatus::NullPointer, "output pointer is null");
        }
        let mut cfg = SearchConfig::from_json(text).map_err(|e| Failure(CubelinStatus::ParseError, e.to_string()))?;
        if workers > 0 {
            cfg.workers = workers;
        }
        let report = run_search(&cfg).map_err(|e| Failure(CubelinStatus::InvalidInput, e.to_string()))?;
        write_string(out, report.summary_json())?;
        if report.has_anomalies() {
            return fail(CubelinStatus::Anomaly, format!("{} anomalous candidate(s)", report.anomalies.len()));
        }
        Ok(CubelinStatus::Ok)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cubelin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cubelin_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cubelin_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
