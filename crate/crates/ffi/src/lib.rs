//! C ABI over `ident-core`.
//!
//! Models and reports are opaque handles created by this library and
//! released with the matching `_free` function. Every fallible call returns
//! an [`IdentStatus`]; on failure a description is available from
//! [`ident_last_error_message`] on the same thread until the next call.
//! Strings passed in must be NUL-terminated UTF-8. Strings handed out must
//! be released with [`ident_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ident_core::diff::Ranking;
use ident_core::model::{parse_model, OdeModel};
use ident_core::pipeline::{analyze, check, IdentReport as Report, Options, Stage};
use ident_core::wronskian::RankMethod;
use ident_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentStatus {
    Ok = 0,
    Internal = 1,
    Parse = 2,
    Budget = 3,
    SelfCheck = 4,
    NullPointer = 5,
    Utf8 = 6,
    Panic = 7,
}

/// How much of the analysis to run; passed to [`ident_analyze`] as an integer.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentStage {
    Io = 0,
    Multi = 1,
    Full = 2,
}

pub struct IdentModel {
    inner: OdeModel,
}

pub struct IdentReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IdentStatus {
    match e.exit_code() {
        2 => IdentStatus::Parse,
        3 => IdentStatus::Budget,
        4 => IdentStatus::SelfCheck,
        _ => IdentStatus::Internal,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (IdentStatus, String)>) -> IdentStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IdentStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            IdentStatus::Panic
        }
    }
}

fn core_err(e: Error) -> (IdentStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (IdentStatus, String)> {
    if p.is_null() {
        return Err((IdentStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (IdentStatus::Utf8, format!("{what} is not valid UTF-8")))
}

fn null(what: &str) -> (IdentStatus, String) {
    (IdentStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn options(ranking: *const c_char) -> Result<Options, (IdentStatus, String)> {
    let mut o = Options {
        timing: false,
        ..Options::default()
    };
    if !ranking.is_null() {
        let r = read_str(ranking, "ranking")?;
        o.io.ranking = Some(Ranking::parse(r).map_err(core_err)?);
    }
    o.method = RankMethod::Symbolic;
    Ok(o)
}

/// Parses a model document into `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ident_model_parse(text: *const c_char, out: *mut *mut IdentModel) -> IdentStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let t = read_str(text, "text")?;
        let m = parse_model(t).map_err(core_err)?;
        *out = Box::into_raw(Box::new(IdentModel { inner: m }));
        Ok(())
    })
}

/// Releases a model; NULL is ignored.
///
/// # Safety
/// `m` must come from [`ident_model_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ident_model_free(m: *mut IdentModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Runs the analysis up to `stage` (an [`IdentStage`] value). `ranking` may
/// be NULL for the default.
///
/// # Safety
/// Pointers must be valid; `ranking` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn ident_analyze(
    m: *const IdentModel,
    ranking: *const c_char,
    stage: u32,
    out: *mut *mut IdentReport,
) -> IdentStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let m = m.as_ref().ok_or_else(|| null("model"))?;
        let o = options(ranking)?;
        let st = match stage {
            s if s == IdentStage::Io as u32 => Stage::Io,
            s if s == IdentStage::Multi as u32 => Stage::Multi,
            s if s == IdentStage::Full as u32 => Stage::Ident,
            s => return Err((IdentStatus::Internal, format!("unknown stage {s}"))),
        };
        let a = analyze(&m.inner, &o, st).map_err(core_err)?;
        let r = Report::new(&a, o.method, 0);
        *out = Box::into_raw(Box::new(IdentReport { inner: r }));
        Ok(())
    })
}

/// JSON rendering of a report into `*out`, released with [`ident_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ident_report_json(r: *const IdentReport, out: *mut *mut c_char) -> IdentStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        let s = CString::new(r.inner.to_json()).map_err(|e| (IdentStatus::Internal, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// Number of experiments sufficient for multi-experiment identifiability.
/// Fails with `IDENT_STATUS_INTERNAL` when the report was produced at the
/// `IO` stage.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ident_report_bound(r: *const IdentReport, out: *mut u64) -> IdentStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("report"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let b = r
            .inner
            .bound
            .ok_or_else(|| (IdentStatus::Internal, "bound not computed at this stage".to_string()))?;
        *out = b as u64;
        Ok(())
    })
}

/// Releases a report; NULL is ignored.
///
/// # Safety
/// `r` must come from [`ident_analyze`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ident_report_free(r: *mut IdentReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Decides whether `expr` over the parameters is identifiable, from a single
/// experiment or, when `multi` is set, from several.
///
/// # Safety
/// Pointers must be valid; `ranking` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn ident_check(
    m: *const IdentModel,
    ranking: *const c_char,
    expr: *const c_char,
    multi: bool,
    out: *mut bool,
) -> IdentStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = m.as_ref().ok_or_else(|| null("model"))?;
        let e = read_str(expr, "expr")?;
        let o = options(ranking)?;
        *out = check(&m.inner, e, multi, &o).map_err(core_err)?;
        Ok(())
    })
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn ident_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ident_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
