use std::ffi::{CStr, CString};
use std::ptr;

use fdlab_ffi::*;

const T1: &str = "[map]\ncatalog = T1\n[simulation]\nzeta = zeta6\n[analysis]\ntheorem = thm1\nx0 = 0\n";

fn last_error() -> String {
    unsafe { CStr::from_ptr(fdlab_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn build(text: &str) -> (FdlabStatus, *mut FdlabProblem) {
    let c = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    let st = unsafe { fdlab_problem_from_config(c.as_ptr(), ptr::null(), &mut p) };
    (st, p)
}

#[test]
fn round_trip_t1() {
    let (st, p) = build(T1);
    assert_eq!(st, FdlabStatus::Ok, "{}", last_error());
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { fdlab_problem_run(p, &mut r) }, FdlabStatus::Ok);
    let mut v = FdlabVerdict::RefutationCandidate;
    assert_eq!(unsafe { fdlab_report_verdict(r, &mut v) }, FdlabStatus::Ok);
    assert_eq!(v, FdlabVerdict::Consistent);
    let (mut value, mut lower) = (0.0, 0.0);
    assert_eq!(unsafe { fdlab_report_rho(r, &mut value, &mut lower) }, FdlabStatus::Ok);
    assert!((value - 1.0).abs() <= 1e-3 && lower <= value);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { fdlab_report_json(r, &mut json) }, FdlabStatus::Ok);
    let doc: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(json) }.to_str().unwrap()).unwrap();
    assert_eq!(doc["verdict"], "consistent");
    unsafe {
        fdlab_string_free(json);
        fdlab_report_free(r);
        fdlab_problem_free(p);
    }
}

#[test]
fn error_codes() {
    let (st, p) = build("[map]\ncatalog = T1\n[analysis]\ntheorem = thm4\n");
    assert_eq!(st, FdlabStatus::Parse);
    assert!(p.is_null());
    assert!(last_error().contains("[map2]"), "{}", last_error());

    let (st, _) = build("[space]\nkind = interval\nbounds = -1, 1\nsamples = 3\n[map]\npiece = [0, 1] : x\n[analysis]\ntheorem = fixed_set\n");
    assert_eq!(st, FdlabStatus::Eval);

    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { fdlab_problem_from_config(ptr::null(), ptr::null(), &mut p) },
        FdlabStatus::Null
    );
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { fdlab_problem_from_config(bad.as_ptr().cast(), ptr::null(), &mut p) },
        FdlabStatus::Utf8
    );
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { fdlab_problem_run(ptr::null(), &mut r) }, FdlabStatus::Null);
}

#[test]
fn rho_missing_for_axioms() {
    let (st, p) = build("[simulation]\nzeta = custom\nexpr = s - t\n[analysis]\ntheorem = axioms\n");
    assert_eq!(st, FdlabStatus::Ok);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { fdlab_problem_run(p, &mut r) }, FdlabStatus::Ok);
    let mut v = FdlabVerdict::Consistent;
    unsafe { fdlab_report_verdict(r, &mut v) };
    assert_eq!(v, FdlabVerdict::HypothesisFailed);
    let (mut a, mut b) = (0.0, 0.0);
    assert_eq!(unsafe { fdlab_report_rho(r, &mut a, &mut b) }, FdlabStatus::Domain);
    unsafe {
        fdlab_report_free(r);
        fdlab_problem_free(p);
    }
}

#[test]
fn catalog_and_version() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fdlab_catalog_list(&mut s) }, FdlabStatus::Ok);
    let names = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { fdlab_string_free(s) };
    assert!(names.lines().any(|l| l == "ELU"));
    let v = unsafe { CStr::from_ptr(fdlab_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/fdlab.h")).unwrap();
    for f in [
        "fdlab_problem_from_config",
        "fdlab_problem_run",
        "fdlab_problem_free",
        "fdlab_report_verdict",
        "fdlab_report_json",
        "fdlab_report_rho",
        "fdlab_report_free",
        "fdlab_catalog_list",
        "fdlab_string_free",
        "fdlab_last_error_message",
        "fdlab_version",
        "FDLAB_STATUS_PARSE",
        "typedef struct FdlabProblem FdlabProblem",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}
