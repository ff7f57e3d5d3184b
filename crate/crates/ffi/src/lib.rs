//! C ABI over `finclone`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`FcStatus`]; on failure the message is kept per thread and can be read
//! with [`fc_last_error`]. Strings handed out must be released with
//! [`fc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use finclone::catalog::lookup;
use finclone::chi::characteristic;
use finclone::clone::min_nonprojection_arity;
use finclone::galois::{in_inv, preserves};
use finclone::io::{generators_from_json, to_json};
use finclone::verify::{verify_decomposition_theorem, Scope, Which};
use finclone::{ArityVerdict, Error, FiniteFunction, GeneratorSet, QSet, DEFAULT_CAP};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Mismatch = 3,
    Capacity = 4,
    Premise = 5,
    NotClosed = 6,
    Panic = 7,
}

impl From<&Error> for FcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Input(_) | Error::NonConstantPi { .. } => FcStatus::InvalidInput,
            Error::CarrierMismatch { .. } | Error::ArityMismatch { .. } => FcStatus::Mismatch,
            Error::Capacity { .. } => FcStatus::Capacity,
            Error::Premise(_) => FcStatus::Premise,
            Error::NotClosed(_) => FcStatus::NotClosed,
        }
    }
}

/// Which decomposition statement [`fc_verify_theorem`] runs.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcTheorem {
    Partial = 0,
    PartialWeak = 1,
    S = 2,
    D2 = 3,
}

pub struct FcFunction(FiniteFunction);

pub struct FcGenerators(GeneratorSet);

pub struct FcQSet(QSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `body`, turning errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> FcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FcStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            FcStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            FcStatus::from(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            FcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Lib(Error::Input(format!("{what} is not UTF-8"))))
}

fn give_string(s: String, dst: &mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail::Lib(Error::Input("string has a nul byte".into())))?;
    *dst = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or come from this library, and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a function from its value table (big-endian cell order).
///
/// # Safety
/// `table` must point to `len` bytes; `out_fn` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_function_new(
    k: usize,
    arity: usize,
    table: *const u8,
    len: usize,
    out_fn: *mut *mut FcFunction,
) -> FcStatus {
    guard(|| {
        let dst = out(out_fn, "out_fn")?;
        let f = FiniteFunction::new(k, arity, slice_arg(table, len, "table")?.to_vec())?;
        *dst = Box::into_raw(Box::new(FcFunction(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a live handle from [`fc_function_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_function_free(f: *mut FcFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// A generator set from `count` function handles (copied).
///
/// # Safety
/// `fns` must point to `count` live handles; `out_gens` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_generators_new(
    k: usize,
    fns: *const *const FcFunction,
    count: usize,
    out_gens: *mut *mut FcGenerators,
) -> FcStatus {
    guard(|| {
        let dst = out(out_gens, "out_gens")?;
        let mut fs = Vec::with_capacity(count);
        for &p in slice_arg(fns, count, "fns")? {
            fs.push(deref(p, "fns[i]")?.0.clone());
        }
        *dst = Box::into_raw(Box::new(FcGenerators(GeneratorSet::new(k, fs)?)));
        Ok(())
    })
}

/// Generators from a function or function-set JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out_gens` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_generators_from_json(json: *const c_char, out_gens: *mut *mut FcGenerators) -> FcStatus {
    guard(|| {
        let dst = out(out_gens, "out_gens")?;
        let g = generators_from_json(str_arg(json, "json")?)?;
        *dst = Box::into_raw(Box::new(FcGenerators(g)));
        Ok(())
    })
}

/// Generators of a built-in catalog entry, named `<k>/<name>`.
///
/// # Safety
/// `name` must be a nul-terminated string; `out_gens` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_generators_catalog(name: *const c_char, out_gens: *mut *mut FcGenerators) -> FcStatus {
    guard(|| {
        let dst = out(out_gens, "out_gens")?;
        let e = lookup(str_arg(name, "name")?)?;
        *dst = Box::into_raw(Box::new(FcGenerators(e.gens)));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a live generator handle.
#[no_mangle]
pub unsafe extern "C" fn fc_generators_free(g: *mut FcGenerators) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of generators, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live generator handle.
#[no_mangle]
pub unsafe extern "C" fn fc_generators_len(g: *const FcGenerators) -> usize {
    g.as_ref().map_or(0, |g| g.0.len())
}

/// `H ⊆ A^m` from `rows` row-major tuples of length `m`.
///
/// # Safety
/// `data` must point to `rows * m` bytes; `out_h` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_qset_new(
    k: usize,
    m: usize,
    data: *const u8,
    rows: usize,
    out_h: *mut *mut FcQSet,
) -> FcStatus {
    guard(|| {
        let dst = out(out_h, "out_h")?;
        let len = rows.checked_mul(m).ok_or(Fail::Lib(Error::Input("rows * m overflows".into())))?;
        let flat = slice_arg(data, len, "data")?;
        let h = QSet::new(k, m, flat.chunks(m.max(1)).map(<[u8]>::to_vec))?;
        *dst = Box::into_raw(Box::new(FcQSet(h)));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a live set handle.
#[no_mangle]
pub unsafe extern "C" fn fc_qset_free(h: *mut FcQSet) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Whether `f` applied row-wise keeps `H` inside itself.
///
/// # Safety
/// Handles must be live; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_preserves(f: *const FcFunction, h: *const FcQSet, result: *mut bool) -> FcStatus {
    guard(|| {
        let dst = out(result, "result")?;
        *dst = preserves(&deref(f, "f")?.0, &deref(h, "h")?.0)?;
        Ok(())
    })
}

/// Whether `H` is invariant under the clone generated by `g`.
///
/// # Safety
/// Handles must be live; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_in_inv(g: *const FcGenerators, h: *const FcQSet, result: *mut bool) -> FcStatus {
    guard(|| {
        let dst = out(result, "result")?;
        *dst = in_inv(&deref(g, "g")?.0, &deref(h, "h")?.0)?;
        Ok(())
    })
}

/// Least arity of a non-projection, searched up to `bound`. When none is
/// found `finite` is false and `arity` is the first arity not examined.
///
/// # Safety
/// `g` must be live; `arity` and `finite` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_min_nonprojection_arity(
    g: *const FcGenerators,
    bound: usize,
    arity: *mut usize,
    finite: *mut bool,
) -> FcStatus {
    guard(|| {
        let (a, fin) = (out(arity, "arity")?, out(finite, "finite")?);
        (*a, *fin) = match min_nonprojection_arity(&deref(g, "g")?.0, bound)? {
            ArityVerdict::Finite(r) => (r, true),
            ArityVerdict::AtLeast(r) => (r, false),
        };
        Ok(())
    })
}

/// The characteristic as JSON with sorted keys.
///
/// # Safety
/// `g` must be live; `json` must be writable. Free the result with
/// [`fc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fc_characteristic_json(
    g: *const FcGenerators,
    bound: usize,
    json: *mut *mut c_char,
) -> FcStatus {
    guard(|| {
        let dst = out(json, "json")?;
        give_string(to_json(&characteristic(&deref(g, "g")?.0, bound)?)?, dst)
    })
}

/// Runs a decomposition statement on `H ⊆ A^m`: exhaustively when
/// `samples` is 0, else on `samples` sets drawn from `seed`. Writes the JSON
/// report and whether it found no failure.
///
/// # Safety
/// `g` must be live; `passed` and `report` must be writable. Free the
/// report with [`fc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn fc_verify_theorem(
    which: FcTheorem,
    g: *const FcGenerators,
    m: usize,
    samples: usize,
    seed: u64,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> FcStatus {
    guard(|| {
        let (ok, dst) = (out(passed, "passed")?, out(report, "report")?);
        let which = match which {
            FcTheorem::Partial => Which::Partial,
            FcTheorem::PartialWeak => Which::PartialWeak,
            FcTheorem::S => Which::S,
            FcTheorem::D2 => Which::D2,
        };
        let scope = if samples == 0 { Scope::Exhaustive } else { Scope::Sampled { seed, samples } };
        let r = verify_decomposition_theorem(which, &deref(g, "g")?.0, "ffi", m, scope, DEFAULT_CAP)?;
        *ok = r.passed();
        give_string(to_json(&r)?, dst)
    })
}
