use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mdist_ffi::*;

const ORIGIN: &str = "fpres v1\nfield 2\ngenerators 1\n0 0\nrelations 0\n";
const DIAG: &str = "fpres v1\nfield 2\ngenerators 1\n1 1\nrelations 0\n";

fn parse(text: &str) -> *mut MdistPresentation {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mdist_presentation_parse(c.as_ptr(), &mut out) }, MdistStatus::Ok);
    assert!(!out.is_null());
    out
}

fn take(s: *mut c_char) -> String {
    let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { mdist_string_free(s) };
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mdist_last_error_message()) }.to_str().unwrap().to_string()
}

#[test]
fn distance_decide_and_bottleneck() {
    let (a, b) = (parse(ORIGIN), parse(DIAG));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mdist_matching_distance(a, b, 3, &mut s) }, MdistStatus::Ok);
    assert_eq!(take(s), "1");

    let mut yes = false;
    let one = CString::new("1").unwrap();
    assert_eq!(unsafe { mdist_decide(a, b, one.as_ptr(), &mut yes) }, MdistStatus::Ok);
    assert!(yes);
    let less = CString::new("0.99").unwrap();
    assert_eq!(unsafe { mdist_decide(a, b, less.as_ptr(), &mut yes) }, MdistStatus::Ok);
    assert!(!yes);

    let (slope, icpt) = (CString::new("1").unwrap(), CString::new("0").unwrap());
    assert_eq!(unsafe { mdist_bottleneck(a, a, slope.as_ptr(), icpt.as_ptr(), &mut s) }, MdistStatus::Ok);
    assert_eq!(take(s), "0");

    unsafe {
        mdist_presentation_free(a);
        mdist_presentation_free(b);
    }
}

#[test]
fn serialize_round_trip() {
    let a = parse(ORIGIN);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mdist_presentation_serialize(a, &mut s) }, MdistStatus::Ok);
    let text = take(s);
    let b = parse(&text);
    assert_eq!(unsafe { mdist_presentation_serialize(b, &mut s) }, MdistStatus::Ok);
    assert_eq!(take(s), text);
    unsafe {
        mdist_presentation_free(a);
        mdist_presentation_free(b);
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mdist_presentation_parse(ptr::null(), &mut out) }, MdistStatus::NullPointer);
    assert!(last_error().contains("null"));

    let bad = CString::new("fpres v1\nfield 4\n").unwrap();
    assert_eq!(unsafe { mdist_presentation_parse(bad.as_ptr(), &mut out) }, MdistStatus::Parse);
    assert!(!last_error().is_empty());

    let invalid_utf8 = [0xffu8, 0];
    assert_eq!(unsafe { mdist_presentation_parse(invalid_utf8.as_ptr().cast(), &mut out) }, MdistStatus::Utf8);

    let a = parse(ORIGIN);
    let mut yes = false;
    let neg = CString::new("-1").unwrap();
    assert_eq!(unsafe { mdist_decide(a, a, neg.as_ptr(), &mut yes) }, MdistStatus::InvalidArgument);
    let junk = CString::new("x").unwrap();
    assert_eq!(unsafe { mdist_decide(a, a, junk.as_ptr(), &mut yes) }, MdistStatus::InvalidArgument);
    let (steep, zero) = (CString::new("2").unwrap(), CString::new("0").unwrap());
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mdist_bottleneck(a, a, steep.as_ptr(), zero.as_ptr(), &mut s) }, MdistStatus::InvalidArgument);
    assert_eq!(unsafe { mdist_matching_distance(a, ptr::null(), 0, &mut s) }, MdistStatus::NullPointer);

    let zero_lambda = CString::new("0").unwrap();
    assert_eq!(unsafe { mdist_decide(a, a, zero_lambda.as_ptr(), &mut yes) }, MdistStatus::Ok);
    assert!(yes);
    assert_eq!(last_error(), "");
    unsafe {
        mdist_presentation_free(a);
        mdist_presentation_free(ptr::null_mut());
        mdist_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(mdist_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/mdist.h")).unwrap();
    for name in [
        "mdist_presentation_parse",
        "mdist_presentation_free",
        "mdist_presentation_serialize",
        "mdist_matching_distance",
        "mdist_decide",
        "mdist_bottleneck",
        "mdist_string_free",
        "mdist_last_error_message",
        "mdist_version",
        "typedef struct MdistPresentation MdistPresentation;",
        "MDIST_STATUS_PANIC = 5",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
