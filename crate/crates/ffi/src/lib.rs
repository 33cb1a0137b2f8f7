//! C ABI over `qc-core`.
//!
//! Values cross the boundary as opaque handles or JSON strings in the
//! formats of the core crate. Every fallible call returns a [`QcStatus`];
//! on failure a message is available from [`qc_last_error`] on the same
//! thread. Strings handed out by this library are released with
//! [`qc_string_free`], handles with their matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qc_core::gradings::{
    classify, grading_isomorphism, grading_validate, standard_quartic, structurable_s, AbGroup, Family, FamilyParams,
    Grading, Param,
};
use qc_core::maps::{
    factor_automorphism, inverse_factors, is_automorphism, realize, semidirect_mul, AutFactors, LinEndo,
};
use qc_core::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    NotAutomorphism = 5,
    ConstraintViolation = 6,
    GroupMismatch = 7,
    Unclassifiable = 8,
    Internal = 9,
    Panic = 10,
}

/// A grading of the algebra.
pub struct QcGrading(Grading);

/// A linear endomorphism of the algebra.
pub struct QcEndo(LinEndo);

/// Factor coordinates `(r1, r2, psi, sigma)` of an automorphism.
pub struct QcFactors(AutFactors);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QcStatus {
    match err {
        Error::Parse(_) => QcStatus::Parse,
        Error::NotAutomorphism(_) | Error::NotInS1(_) => QcStatus::NotAutomorphism,
        Error::ConstraintViolation(_) => QcStatus::ConstraintViolation,
        Error::GroupMismatch(_) => QcStatus::GroupMismatch,
        Error::Unclassifiable(_) => QcStatus::Unclassifiable,
        Error::Internal(_) => QcStatus::Internal,
        _ => QcStatus::InvalidArgument,
    }
}

struct Failure(QcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(QcStatus::Parse, e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            QcStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(QcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(QcStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(value)))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(QcStatus::Internal, "output contains NUL".into()))?;
    write_out(out, c.into_raw())
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a grading document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_from_json(json: *const c_char, out: *mut *mut QcGrading) -> QcStatus {
    guard(|| {
        let g: Grading = serde_json::from_str(read_str(json)?)?;
        write_handle(out, QcGrading(g))
    })
}

/// Builds a family member. `params_json` is a JSON array of parameters in
/// the family's order: group elements as integer arrays, scalars as arrays
/// of four rational strings.
///
/// # Safety
/// All strings must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_make(
    family: *const c_char,
    group: *const c_char,
    params_json: *const c_char,
    out: *mut *mut QcGrading,
) -> QcStatus {
    guard(|| {
        let fam: Family = read_str(family)?.parse()?;
        let grp = AbGroup::parse(read_str(group)?)?;
        let params: Vec<Param> = serde_json::from_str(read_str(params_json)?)?;
        let g = FamilyParams::from_params(fam, &params)?.build(&grp)?;
        write_handle(out, QcGrading(g))
    })
}

/// The standard quartic grading for `which == 0`, otherwise the
/// structurable grading with even part `K + K x_which` for `which` in 1..=3.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_standard(which: u32, out: *mut *mut QcGrading) -> QcStatus {
    guard(|| {
        let g = match which {
            0 => standard_quartic(),
            i => structurable_s(i as usize)?,
        };
        write_handle(out, QcGrading(g))
    })
}

/// Serializes a grading; free the result with [`qc_string_free`].
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_to_json(g: *const QcGrading, out: *mut *mut c_char) -> QcStatus {
    guard(|| write_string(out, serde_json::to_string(&borrow(g)?.0)?))
}

/// Writes whether the decomposition is a grading.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_validate(g: *const QcGrading, out: *mut bool) -> QcStatus {
    guard(|| write_out(out, grading_validate(&borrow(g)?.0).valid))
}

/// Classifies a grading; the result is a classification JSON document.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_classify(g: *const QcGrading, out: *mut *mut c_char) -> QcStatus {
    guard(|| {
        let c = classify(&borrow(g)?.0)?;
        write_string(out, serde_json::to_string(&c)?)
    })
}

/// Searches for an automorphism mapping `a` onto `b` degree by degree.
/// Writes NULL when none exists.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_isomorphism(
    a: *const QcGrading,
    b: *const QcGrading,
    out: *mut *mut QcFactors,
) -> QcStatus {
    guard(|| match grading_isomorphism(&borrow(a)?.0, &borrow(b)?.0)? {
        Some(f) => write_handle(out, QcFactors(f)),
        None => write_out(out, ptr::null_mut()),
    })
}

/// Image of a grading under an automorphism.
///
/// # Safety
/// `g`, `f` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_apply(
    g: *const QcGrading,
    f: *const QcFactors,
    out: *mut *mut QcGrading,
) -> QcStatus {
    guard(|| {
        let moved = borrow(g)?.0.apply_automorphism(&borrow(f)?.0)?;
        write_handle(out, QcGrading(moved))
    })
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_grading_free(g: *mut QcGrading) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Parses an 8x8 matrix document.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_endo_from_json(json: *const c_char, out: *mut *mut QcEndo) -> QcStatus {
    guard(|| {
        let m: LinEndo = serde_json::from_str(read_str(json)?)?;
        write_handle(out, QcEndo(m))
    })
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_endo_to_json(m: *const QcEndo, out: *mut *mut c_char) -> QcStatus {
    guard(|| write_string(out, serde_json::to_string(&borrow(m)?.0)?))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_endo_is_automorphism(m: *const QcEndo, out: *mut bool) -> QcStatus {
    guard(|| write_out(out, is_automorphism(&borrow(m)?.0)))
}

/// Factors an automorphism; fails with `NotAutomorphism` otherwise.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_endo_factor(m: *const QcEndo, out: *mut *mut QcFactors) -> QcStatus {
    guard(|| write_handle(out, QcFactors(factor_automorphism(&borrow(m)?.0)?)))
}

/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_endo_free(m: *mut QcEndo) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Parses a factor document; `r1` and `r2` must have norm one.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_factors_from_json(json: *const c_char, out: *mut *mut QcFactors) -> QcStatus {
    guard(|| {
        let f: AutFactors = serde_json::from_str(read_str(json)?)?;
        f.validate()?;
        write_handle(out, QcFactors(f))
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_factors_to_json(f: *const QcFactors, out: *mut *mut c_char) -> QcStatus {
    guard(|| write_string(out, serde_json::to_string(&borrow(f)?.0)?))
}

/// The matrix of the automorphism with the given factors.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_factors_realize(f: *const QcFactors, out: *mut *mut QcEndo) -> QcStatus {
    guard(|| write_handle(out, QcEndo(realize(&borrow(f)?.0)?)))
}

/// Factors of `realize(a) ∘ realize(b)`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_factors_compose(
    a: *const QcFactors,
    b: *const QcFactors,
    out: *mut *mut QcFactors,
) -> QcStatus {
    guard(|| write_handle(out, QcFactors(semidirect_mul(&borrow(a)?.0, &borrow(b)?.0))))
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_factors_inverse(f: *const QcFactors, out: *mut *mut QcFactors) -> QcStatus {
    guard(|| write_handle(out, QcFactors(inverse_factors(&borrow(f)?.0))))
}

/// # Safety
/// `f` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_factors_free(f: *mut QcFactors) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}
