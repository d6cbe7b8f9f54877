//! C ABI over the torbun library.
//!
//! A problem is loaded from JSON text into an opaque handle; commands run
//! against the handle with their options as a JSON object and return the
//! result document as a JSON string. Strings returned by this library
//! must be released with [`torbun_string_free`], handles with
//! [`torbun_problem_free`].
//!
//! Every fallible call returns a [`TorbunStatus`]. On failure the message
//! is available from [`torbun_last_error`] on the same thread until the
//! next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use torbun::commands::{self, Command, Options};
use torbun::problem::Problem;
use torbun::Error;

/// Status codes. The nonzero values 2, 3 and 4 match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorbunStatus {
    Ok = 0,
    /// Malformed input, a failed precondition or a non-generic vector.
    Validation = 2,
    /// A mathematical assertion failed, e.g. a balancing violation.
    Math = 3,
    /// No generic vector was found.
    SearchExhausted = 4,
    NullArgument = 5,
    InvalidUtf8 = 6,
    UnknownCommand = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

/// An opaque loaded problem.
pub struct TorbunProblem {
    inner: Problem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("no interior nul")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> TorbunStatus {
    match commands::exit_code(err) {
        commands::EXIT_MATH => TorbunStatus::Math,
        commands::EXIT_SEARCH => TorbunStatus::SearchExhausted,
        _ => TorbunStatus::Validation,
    }
}

fn fail(status: TorbunStatus, msg: impl Into<String>) -> TorbunStatus {
    set_error(msg);
    status
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, TorbunStatus> {
    if p.is_null() {
        return Err(fail(TorbunStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(TorbunStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn guarded(f: impl FnOnce() -> TorbunStatus) -> TorbunStatus {
    clear_error();
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(TorbunStatus::Internal, "internal panic"))
}

/// Parses and validates a problem file given as JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn torbun_problem_load(json: *const c_char, out: *mut *mut TorbunProblem) -> TorbunStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TorbunStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Problem::from_json(text) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(TorbunProblem { inner: p }));
                TorbunStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Releases a handle from [`torbun_problem_load`]. Null is ignored.
///
/// # Safety
/// `problem` must come from [`torbun_problem_load`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn torbun_problem_free(problem: *mut TorbunProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Runs `command` (a CLI command name such as `"mw-product"`) with options
/// given as a JSON object, e.g. `{"v": "2,1", "cross_check": true}`, or
/// null for defaults. On `Ok`, `*out_json` receives the result document
/// and `*out_exit_code` the code the CLI would exit with; a document can
/// carry a nonzero code, e.g. for a failed balancing check.
///
/// # Safety
/// Pointers must be valid; strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn torbun_run(
    problem: *const TorbunProblem,
    command: *const c_char,
    options_json: *const c_char,
    out_json: *mut *mut c_char,
    out_exit_code: *mut i32,
) -> TorbunStatus {
    guarded(|| {
        if problem.is_null() || out_json.is_null() || out_exit_code.is_null() {
            return fail(TorbunStatus::NullArgument, "problem, out_json and out_exit_code must be non-null");
        }
        *out_json = ptr::null_mut();
        let name = match read_str(command, "command") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(cmd) = Command::from_name(name) else {
            return fail(TorbunStatus::UnknownCommand, format!("unknown command '{name}'"));
        };
        let opts: Options = if options_json.is_null() {
            Options::default()
        } else {
            let text = match read_str(options_json, "options_json") {
                Ok(t) => t,
                Err(s) => return s,
            };
            match serde_json::from_str(text) {
                Ok(o) => o,
                Err(e) => return fail(TorbunStatus::Validation, format!("options: {e}")),
            }
        };
        match commands::run(cmd, &(*problem).inner, &opts) {
            Ok(report) => {
                *out_json = CString::new(report.to_json()).expect("json has no nul").into_raw();
                *out_exit_code = report.exit_code;
                TorbunStatus::Ok
            }
            Err(e) => {
                *out_exit_code = commands::exit_code(&e);
                fail(status_of(&e), e.to_string())
            }
        }
    })
}

/// The SHA-256 digest of the loaded problem text, as lowercase hex.
/// Release with [`torbun_string_free`]. Returns null for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn torbun_problem_digest(problem: *const TorbunProblem) -> *mut c_char {
    if problem.is_null() {
        return ptr::null_mut();
    }
    CString::new((*problem).inner.digest.clone()).expect("hex").into_raw()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn torbun_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failure on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn torbun_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn torbun_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
