//! C ABI for the `mdist` engine.
//!
//! Presentations are opaque handles created by [`mdist_presentation_parse`] and
//! released with [`mdist_presentation_free`]. Every fallible call returns an
//! [`MdistStatus`]; on failure [`mdist_last_error_message`] describes the error
//! for the calling thread. Rational results are returned as owned strings in the
//! canonical `p/q` form (or `inf`) and must be released with [`mdist_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mdist::candidates::matching_distance;
use mdist::decision::{decide_leq, slice_bars};
use mdist::fpres::{parse_presentation, serialize_presentation};
use mdist::matching::bottleneck_distance;
use mdist::presentation::Presentation;
use mdist::rational::Rational;
use mdist::slices::DualPoint;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdistStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// Presentation text could not be parsed or failed validation.
    Parse = 3,
    /// A numeric argument was malformed or out of range.
    InvalidArgument = 4,
    /// An internal error; the handle arguments are left untouched.
    Panic = 5,
}

/// Opaque presentation handle.
pub struct MdistPresentation {
    inner: Presentation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

type Outcome = Result<(), (MdistStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> MdistStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MdistStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            MdistStatus::Panic
        }
    }
}

fn null(what: &str) -> (MdistStatus, String) {
    (MdistStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (MdistStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (MdistStatus::Utf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `p` must be null or a handle from [`mdist_presentation_parse`].
unsafe fn read_handle<'a>(p: *const MdistPresentation, what: &str) -> Result<&'a Presentation, (MdistStatus, String)> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

fn read_rational(s: &str, what: &str) -> Result<Rational, (MdistStatus, String)> {
    s.parse().map_err(|e| (MdistStatus::InvalidArgument, format!("{what}: {e}")))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Outcome {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).expect("no interior NUL").into_raw();
    Ok(())
}

/// Parses `fpres v1` text into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mdist_presentation_parse(text: *const c_char, out: *mut *mut MdistPresentation) -> MdistStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(text, "text")?;
        let inner = parse_presentation(text).map_err(|e| (MdistStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(MdistPresentation { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mdist_presentation_free(p: *mut MdistPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical `fpres v1` text of a presentation.
///
/// # Safety
/// `p` must be a valid handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mdist_presentation_serialize(p: *const MdistPresentation, out: *mut *mut c_char) -> MdistStatus {
    guard(|| {
        let q = read_handle(p, "presentation")?;
        write_string(out, serialize_presentation(q))
    })
}

/// Exact matching distance as a string (`inf`, an integer, or `p/q`).
///
/// # Safety
/// `a` and `b` must be valid handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mdist_matching_distance(
    a: *const MdistPresentation,
    b: *const MdistPresentation,
    seed: u64,
    out: *mut *mut c_char,
) -> MdistStatus {
    guard(|| {
        let (q, q2) = (read_handle(a, "a")?, read_handle(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, matching_distance(q, q2, seed).value.to_string())
    })
}

/// Writes whether `d_M(a, b) ≤ lambda` to `*out`.
///
/// # Safety
/// `a` and `b` must be valid handles, `lambda` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdist_decide(
    a: *const MdistPresentation,
    b: *const MdistPresentation,
    lambda: *const c_char,
    out: *mut bool,
) -> MdistStatus {
    guard(|| {
        let (q, q2) = (read_handle(a, "a")?, read_handle(b, "b")?);
        let lambda = read_rational(read_str(lambda, "lambda")?, "lambda")?;
        if lambda.is_negative() {
            return Err((MdistStatus::InvalidArgument, "lambda must be nonnegative".into()));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = decide_leq(q, q2, &lambda);
        Ok(())
    })
}

/// Bottleneck distance of the slice barcodes at the dual point `(slope, intercept)`,
/// with `0 < slope ≤ 1`.
///
/// # Safety
/// `a` and `b` must be valid handles, the numbers NUL-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mdist_bottleneck(
    a: *const MdistPresentation,
    b: *const MdistPresentation,
    slope: *const c_char,
    intercept: *const c_char,
    out: *mut *mut c_char,
) -> MdistStatus {
    guard(|| {
        let (q, q2) = (read_handle(a, "a")?, read_handle(b, "b")?);
        let slope = read_rational(read_str(slope, "slope")?, "slope")?;
        let intercept = read_rational(read_str(intercept, "intercept")?, "intercept")?;
        let s = DualPoint::new(slope, intercept).map_err(|e| (MdistStatus::InvalidArgument, e.to_string()))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, bottleneck_distance(&slice_bars(q, &s), &slice_bars(q2, &s)).to_string())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mdist_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mdist_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mdist_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
