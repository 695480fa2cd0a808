use std::ffi::{c_char, CStr, CString};
use std::ptr;

use knotthin_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { knotthin_string_free(s) };
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(knotthin_last_error()) }.to_str().unwrap().to_owned()
}

struct Engine(*mut KnotthinEngine);

impl Engine {
    fn new() -> Self {
        Engine(knotthin_engine_new(1_000_000))
    }
}

impl Drop for Engine {
    fn drop(&mut self) {
        unsafe { knotthin_engine_free(self.0) };
    }
}

#[test]
fn trefoil_invariants() {
    let e = Engine::new();
    let mut out = ptr::null_mut();
    let rc = unsafe { knotthin_invariants_pq(e.0, 3, 1, 0, &mut out) };
    assert_eq!(rc, KNOTTHIN_OK);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["det"], "3");
    assert_eq!(v["sigma"], 2);
    assert_eq!(v["phase_pow"], 2);
}

#[test]
fn theta_from_pd() {
    let e = Engine::new();
    let src = CString::new("S[1,2,2,1]").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { knotthin_invariants_pd(e.0, src.as_ptr(), &mut out) }, KNOTTHIN_OK);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["cdet"], "1");
    let bad = CString::new("X[1,2").unwrap();
    assert_eq!(unsafe { knotthin_invariants_pd(e.0, bad.as_ptr(), &mut out) }, KNOTTHIN_ERR_INVALID_INPUT);
    assert!(out.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn poincare_and_gate() {
    let e = Engine::new();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { knotthin_poincare_pq(e.0, 3, 1, 0, 5, 0, &mut out) }, KNOTTHIN_OK);
    let p: knotthin::laurent::LaurentPoly = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(p.to_string(), "q^8 + q^12t^-2 + q^20t^-3");
    assert_eq!(unsafe { knotthin_poincare_pq(e.0, 3, 1, 0, 3, 0, &mut out) }, KNOTTHIN_ERR_RANK);
    assert_eq!(unsafe { knotthin_poincare_pq(e.0, 3, 1, 0, 3, 1, &mut out) }, KNOTTHIN_OK);
    take(out);
    assert_eq!(unsafe { knotthin_poincare_pq(e.0, 4, 2, 0, 5, 0, &mut out) }, KNOTTHIN_ERR_INVALID_INPUT);
}

#[test]
fn certificate_roundtrip_and_tamper() {
    let e = Engine::new();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { knotthin_certify_pq(e.0, 12, 5, 1, 5, &mut out) }, KNOTTHIN_OK);
    let cert = take(out);
    let c = CString::new(cert.clone()).unwrap();
    assert_eq!(unsafe { knotthin_verify_certificate(e.0, c.as_ptr(), 5, &mut out) }, KNOTTHIN_OK);
    take(out);
    let mut v: serde_json::Value = serde_json::from_str(&cert).unwrap();
    v["sigma"] = serde_json::json!(v["sigma"].as_i64().unwrap() + 2);
    let c = CString::new(v.to_string()).unwrap();
    assert_eq!(unsafe { knotthin_verify_certificate(e.0, c.as_ptr(), 5, &mut out) }, KNOTTHIN_ERR_CHECK_FAILED);
    let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert!(report["failures"].as_array().unwrap().iter().any(|f| f["check"] == "sigma" && f["path"] == "root"));
    assert_eq!(unsafe { knotthin_certify_pq(e.0, 0, 0, 0, 5, &mut out) }, KNOTTHIN_ERR_INVALID_INPUT);
}

#[test]
fn null_arguments_and_budget() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { knotthin_invariants_pq(ptr::null(), 3, 1, 0, &mut out) }, KNOTTHIN_ERR_USAGE);
    let e = Engine::new();
    assert_eq!(unsafe { knotthin_invariants_pq(e.0, 3, 1, 0, ptr::null_mut()) }, KNOTTHIN_ERR_USAGE);
    let tiny = knotthin_engine_new(2);
    assert_eq!(unsafe { knotthin_invariants_pq(tiny, 29, 12, 0, &mut out) }, KNOTTHIN_ERR_RESOURCE_LIMIT);
    unsafe { knotthin_engine_free(tiny) };
    unsafe { knotthin_string_free(ptr::null_mut()) };
}

#[test]
fn header_lists_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/knotthin.h")).unwrap();
    for f in [
        "knotthin_engine_new",
        "knotthin_engine_free",
        "knotthin_string_free",
        "knotthin_last_error",
        "knotthin_invariants_pq",
        "knotthin_invariants_pd",
        "knotthin_poincare_pq",
        "knotthin_certify_pq",
        "knotthin_verify_certificate",
        "typedef struct KnotthinEngine KnotthinEngine",
        "#define KNOTTHIN_ERR_RANK 4",
    ] {
        assert!(h.contains(f), "{f}");
    }
}
