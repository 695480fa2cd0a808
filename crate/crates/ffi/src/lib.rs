//! C ABI over `knotthin`.
//!
//! All results are returned as NUL-terminated JSON strings that the caller
//! releases with [`knotthin_string_free`]. Functions return one of the
//! `KNOTTHIN_*` status codes; on failure [`knotthin_last_error`] describes
//! the problem for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use knotthin::diagram::plat::{normalize_code, plat_from_cf, LinkOrientation};
use knotthin::diagram::{pd, Diagram};
use knotthin::homfly::HomflyEngine;
use knotthin::thinness::certificate::{CertNode, Certifier, Verifier};
use knotthin::thinness::{self, ThinData};
use knotthin::{invariants, Error};

pub const KNOTTHIN_OK: i32 = 0;
/// Null pointer, bad UTF-8 or other misuse of the API.
pub const KNOTTHIN_ERR_USAGE: i32 = 1;
pub const KNOTTHIN_ERR_INVALID_INPUT: i32 = 2;
pub const KNOTTHIN_ERR_RESOURCE_LIMIT: i32 = 3;
/// `N <= 4` without the conjectural flag.
pub const KNOTTHIN_ERR_RANK: i32 = 4;
/// A checked identity or certificate failed.
pub const KNOTTHIN_ERR_CHECK_FAILED: i32 = 5;
pub const KNOTTHIN_ERR_PANIC: i32 = 6;

/// Opaque HOMFLY engine with its memo table. Safe to share between threads.
pub struct KnotthinEngine {
    inner: HomflyEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Usage(String),
    Lib(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, stores its JSON in `*out` and maps failures to status codes.
fn guarded(out: *mut *mut c_char, f: impl FnOnce() -> Result<String, Failure>) -> i32 {
    if out.is_null() {
        set_error("output pointer is null");
        return KNOTTHIN_ERR_USAGE;
    }
    unsafe { *out = ptr::null_mut() };
    let (code, msg, body) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(json)) => (KNOTTHIN_OK, String::new(), Some(json)),
        Ok(Err(Failure::Usage(m))) => (KNOTTHIN_ERR_USAGE, m, None),
        Ok(Err(Failure::Lib(e))) => (e.code(), e.to_string(), None),
        Ok(Err(Failure::Check(json))) => (KNOTTHIN_ERR_CHECK_FAILED, "verification failed".into(), Some(json)),
        Err(_) => (KNOTTHIN_ERR_PANIC, "internal panic".into(), None),
    };
    set_error(&msg);
    if let Some(json) = body {
        match CString::new(json) {
            Ok(c) => unsafe { *out = c.into_raw() },
            Err(_) => {
                set_error("result contains NUL");
                return KNOTTHIN_ERR_USAGE;
            }
        }
    }
    code
}

fn engine<'a>(e: *const KnotthinEngine) -> Result<&'a HomflyEngine, Failure> {
    unsafe { e.as_ref() }.map(|e| &e.inner).ok_or_else(|| Failure::Usage("engine is null".into()))
}

fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Usage("string argument is null".into()));
    }
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| Failure::Usage("string is not UTF-8".into()))
}

fn orientation(reversed: i32) -> LinkOrientation {
    if reversed != 0 {
        LinkOrientation::Reversed
    } else {
        LinkOrientation::Standard
    }
}

fn plat(p: i64, q: i64, reversed: i32) -> Result<Diagram, Failure> {
    Ok(plat_from_cf(&normalize_code(p, q)?, orientation(reversed)))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializes")
}

/// Creates an engine that expands at most `node_budget` skein nodes over
/// its lifetime. Free it with [`knotthin_engine_free`].
#[no_mangle]
pub extern "C" fn knotthin_engine_new(node_budget: u64) -> *mut KnotthinEngine {
    Box::into_raw(Box::new(KnotthinEngine { inner: HomflyEngine::new(node_budget) }))
}

/// # Safety
/// `engine` must come from [`knotthin_engine_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn knotthin_engine_free(engine: *mut KnotthinEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn knotthin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn knotthin_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Invariants (HOMFLY, Det, signature, linking) of K(p, q).
///
/// # Safety
/// `engine` must be a live engine and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn knotthin_invariants_pq(
    engine: *const KnotthinEngine,
    p: i64,
    q: i64,
    reversed: i32,
    out: *mut *mut c_char,
) -> i32 {
    guarded(out, || {
        let e = self::engine(engine)?;
        Ok(to_json(&invariants::summarize(e, &plat(p, q, reversed)?)?))
    })
}

/// Invariants of the first diagram in a PD-code string.
///
/// # Safety
/// `engine` must be a live engine, `pd_code` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn knotthin_invariants_pd(
    engine: *const KnotthinEngine,
    pd_code: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guarded(out, || {
        let e = self::engine(engine)?;
        let d = pd::parse(text(pd_code)?)?;
        Ok(to_json(&invariants::summarize(e, &d)?))
    })
}

/// Predicted reduced sl(N) Poincaré polynomial of K(p, q) as a JSON
/// polynomial in `q`, `t`.
///
/// # Safety
/// `engine` must be a live engine and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn knotthin_poincare_pq(
    engine: *const KnotthinEngine,
    p: i64,
    q: i64,
    reversed: i32,
    n: i64,
    conjectural: i32,
    out: *mut *mut c_char,
) -> i32 {
    guarded(out, || {
        let e = self::engine(engine)?;
        thinness::check_n(n, conjectural != 0)?;
        let thin = ThinData::from_diagram(e, &plat(p, q, reversed)?)?;
        Ok(to_json(&thin.poincare(n)))
    })
}

/// Thinness certificate of K(p, q) as JSON.
///
/// # Safety
/// `engine` must be a live engine and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn knotthin_certify_pq(
    engine: *const KnotthinEngine,
    p: i64,
    q: i64,
    reversed: i32,
    n: i64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(out, || {
        let e = self::engine(engine)?;
        thinness::check_n(n, false)?;
        let code = normalize_code(p, q)?;
        Ok(Certifier::new(e, n).certify(&code, orientation(reversed))?.to_json())
    })
}

/// Verifies a certificate. The report JSON is written to `out` both on
/// success and when checks fail (`KNOTTHIN_ERR_CHECK_FAILED`).
///
/// # Safety
/// `engine` must be a live engine, `certificate_json` a NUL-terminated
/// string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn knotthin_verify_certificate(
    engine: *const KnotthinEngine,
    certificate_json: *const c_char,
    n: i64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(out, || {
        let e = self::engine(engine)?;
        let cert = CertNode::from_json(text(certificate_json)?)?;
        let report = Verifier::new(e).verify(&cert, n);
        let json = to_json(&report);
        if report.ok() {
            Ok(json)
        } else {
            Err(Failure::Check(json))
        }
    })
}
