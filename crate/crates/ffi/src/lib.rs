//! C ABI over `plumbroot`.
//!
//! Handles are opaque and owned by the caller; free each with its `_free`
//! function. Every call returns a [`PlumbrootStatus`]; on anything but
//! `PLUMBROOT_STATUS_OK` the thread's last error message is set and output
//! parameters are left untouched. Strings returned through `char **` are
//! NUL-terminated, owned by the caller and released with
//! [`plumbroot_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use plumbroot::admissible::{Expansion, FHat, FHatPm, Family, SeedFamily};
use plumbroot::rational::{fmt_q, parse_q};
use plumbroot::root::{build_root, normalize_root, GradingMode, LatticeContext, Top};
use plumbroot::series::{specialize_t1, two_var_series};
use plumbroot::spinc::SpincGroup;
use plumbroot::{Error, Plumbing};

/// Result of every call. Library errors keep the kind reported by the CLI.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlumbrootStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    MalformedInput = 3,
    Io = 4,
    NotATree = 5,
    BadIndex = 6,
    NotNegativeDefinite = 7,
    NotCharacteristic = 8,
    NotDeltaParity = 9,
    MoveNotApplicable = 10,
    MoveMismatch = 11,
    GenerationFailed = 12,
    SeedsExhausted = 13,
    A3Violated = 14,
    NotStabilized = 15,
    AmbiguousSpinc = 16,
    /// A bug inside the library; the message carries the panic text.
    Internal = 99,
}

impl From<&Error> for PlumbrootStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::MalformedInput(_) => PlumbrootStatus::MalformedInput,
            Error::Io { .. } => PlumbrootStatus::Io,
            Error::NotATree(_) => PlumbrootStatus::NotATree,
            Error::BadIndex { .. } => PlumbrootStatus::BadIndex,
            Error::NotNegativeDefinite => PlumbrootStatus::NotNegativeDefinite,
            Error::NotCharacteristic(_) => PlumbrootStatus::NotCharacteristic,
            Error::NotDeltaParity(_) => PlumbrootStatus::NotDeltaParity,
            Error::MoveNotApplicable(_) => PlumbrootStatus::MoveNotApplicable,
            Error::MoveMismatch { .. } => PlumbrootStatus::MoveMismatch,
            Error::GenerationFailed(_) => PlumbrootStatus::GenerationFailed,
            Error::SeedsExhausted { .. } => PlumbrootStatus::SeedsExhausted,
            Error::A3Violated { .. } => PlumbrootStatus::A3Violated,
            Error::NotStabilized => PlumbrootStatus::NotStabilized,
            Error::AmbiguousSpinc(_) => PlumbrootStatus::AmbiguousSpinc,
        }
    }
}

/// A validated plumbing tree.
pub struct PlumbrootPlumbing {
    inner: Plumbing,
}

/// A plumbing together with one characteristic vector.
pub struct PlumbrootContext {
    inner: LatticeContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PlumbrootStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(PlumbrootStatus::from(&e), e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn set_last_error(msg: String) {
    // interior NULs cannot cross the ABI
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

/// Runs `body`, converting errors and panics to a status.
fn guard(body: impl FnOnce() -> Outcome<()>) -> PlumbrootStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PlumbrootStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal error".into());
            set_last_error(msg);
            PlumbrootStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PlumbrootStatus::NullArgument, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PlumbrootStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Outcome<&'a [T]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Outcome<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Outcome<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Outcome<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Failure(PlumbrootStatus::Internal, "NUL in output".into()))?;
    out.write(c.into_raw());
    Ok(())
}

/// `NULL` or `"fhat"`, `"fhat+"`, `"fhat-"`, or a JSON list of seed pairs.
unsafe fn family_arg(p: *const c_char) -> Outcome<Family> {
    if p.is_null() {
        return Ok(Arc::new(FHat));
    }
    Ok(match str_arg(p, "family")?.trim() {
        "fhat" => Arc::new(FHat),
        "fhat+" => Arc::new(FHatPm(Expansion::Plus)),
        "fhat-" => Arc::new(FHatPm(Expansion::Minus)),
        s if s.starts_with('[') => Arc::new(SeedFamily::from_json(s)?),
        s => {
            return Err(Failure(
                PlumbrootStatus::MalformedInput,
                format!("unknown family {s:?}"),
            ))
        }
    })
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn plumbroot_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn plumbroot_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"weights": [...], "edges": [[i, j], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_plumbing_from_json(
    json: *const c_char,
    out: *mut *mut PlumbrootPlumbing,
) -> PlumbrootStatus {
    guard(|| {
        let p = Plumbing::from_json(str_arg(json, "json")?)?;
        write_out(out, Box::into_raw(Box::new(PlumbrootPlumbing { inner: p })))
    })
}

/// Builds a plumbing from `n` weights and `n_edges` edges given as
/// consecutive index pairs in `edges[0 .. 2 * n_edges]`.
///
/// # Safety
/// Arrays must hold the stated number of elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_plumbing_new(
    weights: *const i64,
    n: usize,
    edges: *const usize,
    n_edges: usize,
    out: *mut *mut PlumbrootPlumbing,
) -> PlumbrootStatus {
    guard(|| {
        let w = slice_arg(weights, n, "weights")?.to_vec();
        let e = slice_arg(edges, 2 * n_edges, "edges")?;
        let e = e.chunks_exact(2).map(|pair| (pair[0], pair[1])).collect();
        let p = Plumbing::new(w, e)?;
        write_out(out, Box::into_raw(Box::new(PlumbrootPlumbing { inner: p })))
    })
}

/// # Safety
/// `p` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_plumbing_free(p: *mut PlumbrootPlumbing) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of vertices; 0 for NULL.
///
/// # Safety
/// `p` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_plumbing_len(p: *const PlumbrootPlumbing) -> usize {
    p.as_ref().map_or(0, |p| p.inner.len())
}

/// `|det M|`, the number of spin^c classes.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_plumbing_spinc_count(
    p: *const PlumbrootPlumbing,
    out: *mut u64,
) -> PlumbrootStatus {
    guard(|| {
        let g = SpincGroup::new(&handle(p, "plumbing")?.inner)?;
        write_out(out, g.order())
    })
}

/// Writes the representative of class `index` into `k[0 .. len]`, where
/// `len` must equal the number of vertices.
///
/// # Safety
/// `p` must be a live handle; `k` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_plumbing_spinc(
    p: *const PlumbrootPlumbing,
    index: u64,
    k: *mut i64,
    len: usize,
) -> PlumbrootStatus {
    guard(|| {
        let p = &handle(p, "plumbing")?.inner;
        if len != p.len() {
            return Err(Error::MalformedInput(format!("buffer holds {len}, need {}", p.len())).into());
        }
        let g = SpincGroup::new(p)?;
        if index >= g.order() {
            return Err(Error::BadIndex { index: index as usize, len: g.order() as usize }.into());
        }
        if k.is_null() {
            return Err(null("k"));
        }
        let rep = g.nth(index);
        std::slice::from_raw_parts_mut(k, len).copy_from_slice(&rep);
        Ok(())
    })
}

/// Pairs a plumbing with a characteristic vector `k[0 .. len]`. The context
/// keeps its own copy of the plumbing.
///
/// # Safety
/// `p` must be a live handle; `k` must hold `len` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_context_new(
    p: *const PlumbrootPlumbing,
    k: *const i64,
    len: usize,
    out: *mut *mut PlumbrootContext,
) -> PlumbrootStatus {
    guard(|| {
        let p = &handle(p, "plumbing")?.inner;
        let k = slice_arg(k, len, "k")?;
        if k.len() != p.len() {
            return Err(Error::MalformedInput(format!("k has {} entries, need {}", k.len(), p.len())).into());
        }
        let ctx = LatticeContext::new(p, k)?;
        write_out(out, Box::into_raw(Box::new(PlumbrootContext { inner: ctx })))
    })
}

/// # Safety
/// `c` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_context_free(c: *mut PlumbrootContext) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Minimum of `chi_k` over the lattice.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_context_chi_min(c: *const PlumbrootContext, out: *mut i64) -> PlumbrootStatus {
    guard(|| write_out(out, handle(c, "context")?.inner.chi_min()))
}

/// Level from which every sublevel set is connected.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_context_auto_top(c: *const PlumbrootContext, out: *mut i64) -> PlumbrootStatus {
    guard(|| write_out(out, handle(c, "context")?.inner.auto_top()))
}

/// The d-invariant as `"p/q"`.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_context_d_invariant(
    c: *const PlumbrootContext,
    out: *mut *mut c_char,
) -> PlumbrootStatus {
    guard(|| write_string(out, fmt_q(&handle(c, "context")?.inner.d_invariant())))
}

/// Two-variable series through `q^{Delta + order}` as a JSON array of
/// `{"q", "t", "c"}` terms. `order` is `"p/q"`; `family` as for the CLI, or
/// a JSON seed list, NULL meaning `fhat`.
///
/// # Safety
/// `c` must be a live handle; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_series_json(
    c: *const PlumbrootContext,
    family: *const c_char,
    order: *const c_char,
    out: *mut *mut c_char,
) -> PlumbrootStatus {
    guard(|| {
        let c = &handle(c, "context")?.inner;
        let f = family_arg(family)?;
        let order = parse_q(str_arg(order, "order")?)?;
        let s = two_var_series(c, f.as_ref(), order)?;
        write_string(out, s.to_json().to_string())
    })
}

/// The series at `t = 1` as a JSON array of `{"q", "c"}` terms.
///
/// # Safety
/// As for [`plumbroot_series_json`].
#[no_mangle]
pub unsafe extern "C" fn plumbroot_zhat_json(
    c: *const PlumbrootContext,
    family: *const c_char,
    order: *const c_char,
    out: *mut *mut c_char,
) -> PlumbrootStatus {
    guard(|| {
        let c = &handle(c, "context")?.inner;
        let f = family_arg(family)?;
        let order = parse_q(str_arg(order, "order")?)?;
        let s = specialize_t1(&two_var_series(c, f.as_ref(), order)?);
        write_string(out, s.to_json().to_string())
    })
}

/// The weighted graded root in HF grading, as the CLI's JSON object. With
/// `auto_top` set, `top` is ignored.
///
/// # Safety
/// `c` must be a live handle; `family` NULL or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plumbroot_root_json(
    c: *const PlumbrootContext,
    family: *const c_char,
    top: i64,
    auto_top: bool,
    out: *mut *mut c_char,
) -> PlumbrootStatus {
    guard(|| {
        let c = &handle(c, "context")?.inner;
        let f = family_arg(family)?;
        let top = if auto_top { Top::Auto } else { Top::Level(top) };
        let root = normalize_root(&build_root(c, f.as_ref(), top)?, GradingMode::HfGrading);
        write_string(out, root.to_json().to_string())
    })
}
