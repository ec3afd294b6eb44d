//! C ABI for fdlab.
//!
//! Every fallible call returns an [`FdlabStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`fdlab_last_error_message`] on the same thread. Handles are opaque and
//! released with their `_free` function; strings returned through `char **`
//! are released with [`fdlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fdlab_core::cli::{Overrides, Problem};
use fdlab_core::{catalog, parse_config, FdError, Verdict, VerificationReport};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdlabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    Null = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// Config syntax, schema or expression error.
    Parse = 3,
    /// Argument outside the accepted domain.
    Domain = 4,
    /// Expression evaluation failed on a sample.
    Eval = 5,
    Io = 6,
    /// Panic or serialization failure.
    Internal = 7,
}

/// Verdict codes written by [`fdlab_report_verdict`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdlabVerdict {
    Consistent = 0,
    HypothesisFailed = 1,
    RefutationCandidate = 2,
}

/// Opaque parsed and instantiated problem.
pub struct FdlabProblem {
    inner: Problem,
}

/// Opaque verification report.
pub struct FdlabReport {
    inner: VerificationReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &FdError) -> FdlabStatus {
    match err {
        FdError::Expression { .. } | FdError::Config { .. } | FdError::Schema(_) | FdError::UnknownCatalog(_) => {
            FdlabStatus::Parse
        }
        FdError::Domain(_) => FdlabStatus::Domain,
        FdError::Evaluation(_) => FdlabStatus::Eval,
        FdError::Io(_) | FdError::Csv(_) => FdlabStatus::Io,
        FdError::Json(_) => FdlabStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (FdlabStatus, String)>) -> FdlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FdlabStatus::Ok
        }
        Ok(Err((code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            FdlabStatus::Internal
        }
    }
}

fn lift(err: FdError) -> (FdlabStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (FdlabStatus, String) {
    (FdlabStatus::Null, format!("`{what}` is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (FdlabStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (FdlabStatus::Utf8, format!("`{what}` is not UTF-8: {e}")))
}

fn to_c_string(s: String) -> Result<*mut c_char, (FdlabStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (FdlabStatus::Internal, "string contains a NUL byte".to_string()))
}

/// Parse `config_text` and build the problem. Relative paths in the config
/// resolve against `base_dir`, or the working directory when it is null.
///
/// # Safety
/// `config_text` and a non-null `base_dir` must be NUL-terminated strings;
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdlab_problem_from_config(
    config_text: *const c_char,
    base_dir: *const c_char,
    out: *mut *mut FdlabProblem,
) -> FdlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(config_text, "config_text")?;
        let base = if base_dir.is_null() {
            "."
        } else {
            read_str(base_dir, "base_dir")?
        };
        let cfg = parse_config(text).map_err(lift)?;
        let problem = Problem::from_config(&cfg, Path::new(base), &Overrides::default()).map_err(lift)?;
        *out = Box::into_raw(Box::new(FdlabProblem { inner: problem }));
        Ok(())
    })
}

/// Run the configured analysis.
///
/// # Safety
/// `problem` must come from [`fdlab_problem_from_config`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdlab_problem_run(problem: *const FdlabProblem, out: *mut *mut FdlabReport) -> FdlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let p = problem.as_ref().ok_or_else(|| null("problem"))?;
        let report = p.inner.verify().map_err(lift)?;
        *out = Box::into_raw(Box::new(FdlabReport { inner: report }));
        Ok(())
    })
}

/// # Safety
/// `problem` must be null or come from [`fdlab_problem_from_config`], and
/// must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fdlab_problem_free(problem: *mut FdlabProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// # Safety
/// `report` must come from [`fdlab_problem_run`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdlab_report_verdict(report: *const FdlabReport, out: *mut FdlabVerdict) -> FdlabStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match r.inner.verdict {
            Verdict::Consistent => FdlabVerdict::Consistent,
            Verdict::HypothesisFailed => FdlabVerdict::HypothesisFailed,
            Verdict::RefutationCandidate => FdlabVerdict::RefutationCandidate,
        };
        Ok(())
    })
}

/// The report as a JSON document; free with [`fdlab_string_free`].
///
/// # Safety
/// `report` must come from [`fdlab_problem_run`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdlab_report_json(report: *const FdlabReport, out: *mut *mut c_char) -> FdlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        *out = to_c_string(r.inner.to_json())?;
        Ok(())
    })
}

/// Displacement radius: refined value and the conservative lower value.
/// Infinite when the map moves no sample. `FDLAB_STATUS_DOMAIN` when the
/// analysis computes no radius.
///
/// # Safety
/// `report` must come from [`fdlab_problem_run`]; `value` and `lower` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn fdlab_report_rho(report: *const FdlabReport, value: *mut f64, lower: *mut f64) -> FdlabStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if value.is_null() || lower.is_null() {
            return Err(null("value/lower"));
        }
        let rho = r
            .inner
            .numbers
            .rho
            .as_ref()
            .ok_or((FdlabStatus::Domain, format!("{} reports no rho", r.inner.theorem)))?;
        *value = rho.value;
        *lower = rho.lower;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or come from [`fdlab_problem_run`], and must not
/// be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fdlab_report_free(report: *mut FdlabReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Newline-separated catalog entry names; free with [`fdlab_string_free`].
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdlab_catalog_list(out: *mut *mut c_char) -> FdlabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let names: Vec<&str> = catalog::list().iter().map(|i| i.name).collect();
        *out = to_c_string(names.join("\n"))?;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn fdlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn fdlab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn fdlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
