//! C interface to the reasoner.
//!
//! Every function returns a [`LealcStatus`]. Negative values are errors; the
//! message is available from [`lealc_last_error`] on the calling thread.
//! Strings handed out by the library must be released with
//! [`lealc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lealc_core::kb::KnowledgeBase;
use lealc_core::model::{build_model, ModelError};
use lealc_core::query::{QueryError, Reasoner};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LealcStatus {
    Ok = 0,
    /// The knowledge base has no model.
    Inconsistent = 1,
    NullArgument = -1,
    InvalidUtf8 = -2,
    Parse = -3,
    Tbox = -4,
    UnknownName = -5,
    Unsupported = -6,
    Resource = -7,
    Internal = -99,
}

/// A parsed knowledge base with its cached saturation.
pub struct LealcReasoner {
    inner: Reasoner,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (LealcStatus, String);

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<LealcStatus, Failure>) -> LealcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal error".to_owned());
            LealcStatus::Internal
        }
    }
}

fn query_failure(e: QueryError) -> Failure {
    let status = match &e {
        QueryError::Inconsistent => LealcStatus::Inconsistent,
        QueryError::Parse(_) => LealcStatus::Parse,
        QueryError::TBox(_) => LealcStatus::Tbox,
        QueryError::UnknownName(_) => LealcStatus::UnknownName,
        QueryError::Unsupported(_) | QueryError::Rule(_) => LealcStatus::Unsupported,
        QueryError::Saturation(_) => LealcStatus::Resource,
    };
    (status, e.to_string())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((LealcStatus::NullArgument, "null string argument".to_owned()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (LealcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn reasoner<'a>(r: *const LealcReasoner) -> Result<&'a Reasoner, Failure> {
    r.as_ref()
        .map(|r| &r.inner)
        .ok_or_else(|| (LealcStatus::NullArgument, "null reasoner".to_owned()))
}

unsafe fn hand_out(out: *mut *mut c_char, s: String) -> Result<LealcStatus, Failure> {
    if out.is_null() {
        return Err((LealcStatus::NullArgument, "null output pointer".to_owned()));
    }
    let s = CString::new(s).map_err(|e| (LealcStatus::Internal, e.to_string()))?;
    *out = s.into_raw();
    Ok(LealcStatus::Ok)
}

/// Parses `kb_text` and stores a new reasoner in `*out`.
///
/// # Safety
/// `kb_text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lealc_reasoner_new(kb_text: *const c_char, out: *mut *mut LealcReasoner) -> LealcStatus {
    guard(|| {
        if out.is_null() {
            return Err((LealcStatus::NullArgument, "null output pointer".to_owned()));
        }
        *out = ptr::null_mut();
        let kb = KnowledgeBase::parse(text(kb_text)?).map_err(|e| (LealcStatus::Parse, e.to_string()))?;
        let inner = Reasoner::new(kb).map_err(query_failure)?;
        *out = Box::into_raw(Box::new(LealcReasoner { inner }));
        Ok(LealcStatus::Ok)
    })
}

/// Releases a reasoner. Null is ignored.
///
/// # Safety
/// `r` must come from [`lealc_reasoner_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lealc_reasoner_free(r: *mut LealcReasoner) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Decides consistency: `LEALC_STATUS_OK` when consistent,
/// `LEALC_STATUS_INCONSISTENT` when not.
///
/// # Safety
/// `r` must be a live reasoner.
#[no_mangle]
pub unsafe extern "C" fn lealc_check(r: *const LealcReasoner) -> LealcStatus {
    guard(|| {
        let consistent = reasoner(r)?.is_consistent().map_err(query_failure)?;
        Ok(if consistent {
            LealcStatus::Ok
        } else {
            LealcStatus::Inconsistent
        })
    })
}

/// Answers one query in the text query syntax and stores the answer as a
/// JSON object in `*out_json`.
///
/// # Safety
/// `r` must be a live reasoner, `query` a NUL-terminated string and
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lealc_ask(
    r: *const LealcReasoner,
    query: *const c_char,
    out_json: *mut *mut c_char,
) -> LealcStatus {
    guard(|| {
        let answer = reasoner(r)?.ask_text(text(query)?).map_err(query_failure)?;
        hand_out(out_json, serde_json::to_string(&answer).expect("serializable"))
    })
}

/// Stores the universal model as JSON in `*out_json`.
///
/// # Safety
/// `r` must be a live reasoner and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lealc_model_json(r: *const LealcReasoner, out_json: *mut *mut c_char) -> LealcStatus {
    guard(|| {
        let c = reasoner(r)?.completion().map_err(query_failure)?;
        let m = build_model(c).map_err(|e| match e {
            ModelError::ClashPresent => (LealcStatus::Inconsistent, e.to_string()),
            _ => (LealcStatus::Internal, e.to_string()),
        })?;
        hand_out(out_json, serde_json::to_string(&m.document()).expect("serializable"))
    })
}

/// Stores every rule application of the saturation run as
/// newline-delimited JSON in `*out`.
///
/// # Safety
/// `r` must be a live reasoner and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lealc_trace_ndjson(r: *const LealcReasoner, out: *mut *mut c_char) -> LealcStatus {
    guard(|| {
        let c = reasoner(r)?.completion().map_err(query_failure)?;
        hand_out(out, c.trace_ndjson())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lealc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn lealc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
