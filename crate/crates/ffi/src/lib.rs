//! C interface to loopcert.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every entry point returns an [`LcStatus`];
//! on failure the message is available from [`lc_last_error_message`] on the
//! same thread. Strings returned by the library are freed with
//! [`lc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use loopcert::{
    decide_loop, parse_certificate, parse_patterns, parse_trs, render_decision, validate_loop,
    Decision, Error, Format, SolverConfig, StrategySpec, Trs, ValidatedLoop, Verdict,
};

/// Result codes of all entry points.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    InvalidLoop = 4,
    UnknownStrategy = 5,
    ShapeMismatch = 6,
    Internal = 7,
}

/// Kind of a verdict.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcVerdictKind {
    /// The loop is a loop under the strategy.
    Yes = 0,
    /// Some unrolled step violates the strategy.
    No = 1,
    /// Some problem stayed open within the bounds.
    Unknown = 2,
}

/// A parsed rewrite system.
pub struct LcTrs {
    trs: Trs,
}

/// A validated loop, bound to the system it was parsed against.
pub struct LcLoop {
    lp: ValidatedLoop,
}

/// The outcome of a check.
pub struct LcVerdict {
    decision: Decision,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LcStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownSymbol(_) | Error::ArityMismatch { .. } => LcStatus::Syntax,
        Error::UnknownStrategy(_) => LcStatus::UnknownStrategy,
        Error::ShapeMismatch { .. } => LcStatus::ShapeMismatch,
        _ => LcStatus::InvalidLoop,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (LcStatus, String)>) -> LcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            LcStatus::Internal
        }
    }
}

fn fail(e: Error) -> (LcStatus, String) {
    (status_of(&e), e.to_string())
}

/// # Safety
/// `s` is null or a valid NUL-terminated string.
unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (LcStatus, String)> {
    if s.is_null() {
        return Err((LcStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (LcStatus::InvalidUtf8, e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), (LcStatus, String)> {
    if p.is_null() {
        Err((LcStatus::NullPointer, format!("null {what}")))
    } else {
        Ok(())
    }
}

/// Parses a rewrite system in VAR/RULES syntax.
///
/// # Safety
/// `source` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn lc_trs_parse(source: *const c_char, out: *mut *mut LcTrs) -> LcStatus {
    guard(|| {
        non_null(out, "output pointer")?;
        *out = ptr::null_mut();
        let trs = parse_trs(text(source)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(LcTrs { trs }));
        Ok(())
    })
}

/// Number of rules, 0 for a null handle.
///
/// # Safety
/// `trs` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lc_trs_rule_count(trs: *const LcTrs) -> usize {
    trs.as_ref().map_or(0, |t| t.trs.rules().len())
}

/// # Safety
/// `trs` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_trs_free(trs: *mut LcTrs) {
    if !trs.is_null() {
        drop(Box::from_raw(trs));
    }
}

/// Parses and validates a JSON loop certificate.
///
/// # Safety
/// `trs` is a live handle, `source` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lc_loop_parse(
    trs: *const LcTrs,
    source: *const c_char,
    out: *mut *mut LcLoop,
) -> LcStatus {
    guard(|| {
        non_null(out, "output pointer")?;
        *out = ptr::null_mut();
        non_null(trs, "rewrite system")?;
        let trs = &(*trs).trs;
        let cert = parse_certificate(text(source)?, trs).map_err(fail)?;
        let lp = validate_loop(trs, &cert).map_err(fail)?;
        *out = Box::into_raw(Box::new(LcLoop { lp }));
        Ok(())
    })
}

/// # Safety
/// `lp` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_loop_free(lp: *mut LcLoop) {
    if !lp.is_null() {
        drop(Box::from_raw(lp));
    }
}

unsafe fn run(
    trs: *const LcTrs,
    lp: *const LcLoop,
    spec: impl FnOnce(&Trs) -> Result<StrategySpec, (LcStatus, String)>,
    bound: usize,
    out: *mut *mut LcVerdict,
) -> Result<(), (LcStatus, String)> {
    non_null(out, "output pointer")?;
    *out = ptr::null_mut();
    non_null(trs, "rewrite system")?;
    non_null(lp, "loop")?;
    let trs = &(*trs).trs;
    let spec = spec(trs)?;
    let config = SolverConfig {
        bound: if bound == 0 { SolverConfig::default().bound } else { bound },
        ..SolverConfig::default()
    };
    let decision = decide_loop(trs, &(*lp).lp, &spec, &config).map_err(fail)?;
    *out = Box::into_raw(Box::new(LcVerdict { decision }));
    Ok(())
}

/// Decides the loop for a builtin strategy such as `"leftmost-outermost"`.
/// A `bound` of 0 selects the default exponent bound.
///
/// # Safety
/// `trs` and `lp` are live handles, `strategy` a NUL-terminated string,
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lc_check(
    trs: *const LcTrs,
    lp: *const LcLoop,
    strategy: *const c_char,
    bound: usize,
    out: *mut *mut LcVerdict,
) -> LcStatus {
    guard(|| {
        let name = text(strategy)?;
        run(trs, lp, |_| StrategySpec::from_name(name).map_err(fail), bound, out)
    })
}

/// Decides the loop for the forbidden patterns given in pattern-file syntax.
///
/// # Safety
/// As for [`lc_check`], with `patterns` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn lc_check_forbidden(
    trs: *const LcTrs,
    lp: *const LcLoop,
    patterns: *const c_char,
    bound: usize,
    out: *mut *mut LcVerdict,
) -> LcStatus {
    guard(|| {
        let src = text(patterns)?;
        run(
            trs,
            lp,
            |t| Ok(StrategySpec::ForbiddenSet(parse_patterns(src, t).map_err(fail)?)),
            bound,
            out,
        )
    })
}

/// # Safety
/// `v` is a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn lc_verdict_kind(v: *const LcVerdict) -> LcVerdictKind {
    match v.as_ref().map(|v| &v.decision.verdict) {
        Some(Verdict::IsStrategyLoop) => LcVerdictKind::Yes,
        Some(Verdict::NotStrategyLoop(_)) => LcVerdictKind::No,
        _ => LcVerdictKind::Unknown,
    }
}

/// Writes the JSON report to `out`; release it with [`lc_string_free`].
///
/// # Safety
/// `v` is a live verdict handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lc_verdict_render_json(v: *const LcVerdict, out: *mut *mut c_char) -> LcStatus {
    guard(|| {
        non_null(out, "output pointer")?;
        *out = ptr::null_mut();
        non_null(v, "verdict")?;
        let json = render_decision(&(*v).decision, Format::Json);
        let c = CString::new(json).map_err(|e| (LcStatus::Internal, e.to_string()))?;
        *out = c.into_raw();
        Ok(())
    })
}

/// # Safety
/// `v` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_verdict_free(v: *mut LcVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn lc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
