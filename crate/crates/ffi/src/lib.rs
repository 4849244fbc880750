//! C ABI over the `sumrep` library.
//!
//! Sets and theorem reports are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call
//! returns a [`SumrepStatus`]; the message of the most recent failure on the
//! calling thread is available from [`sumrep_last_error`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sumrep::verify::{is_bhs, min_threshold};
use sumrep::{Error, Exactness, IntegerSet, TheoremId, TheoremParams, TheoremReport};

/// Opaque set handle.
pub struct SumrepSet(IntegerSet);

/// Opaque theorem-report handle.
pub struct SumrepReport(TheoremReport);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumrepStatus {
    Ok = 0,
    NullPointer = 1,
    NegativeElement = 2,
    InvalidParameter = 3,
    Overflow = 4,
    WindowEmpty = 5,
    OutsideWindow = 6,
    PrefixTooShort = 7,
    NoWitness = 8,
    ParseError = 9,
    IoError = 10,
    EmptySet = 11,
    BufferTooSmall = 12,
    Internal = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumrepTheorem {
    T1 = 1,
    T2 = 2,
    T3 = 3,
}

/// Exactness window: `prefix == false` treats the set as complete;
/// otherwise the set is asserted to hold every element `<= bound`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SumrepMode {
    pub prefix: bool,
    pub bound: u64,
}

impl From<SumrepMode> for Exactness {
    fn from(m: SumrepMode) -> Self {
        if m.prefix {
            Exactness::Prefix(m.bound)
        } else {
            Exactness::Complete
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SumrepStatus {
    match e {
        Error::NegativeElement(_) => SumrepStatus::NegativeElement,
        Error::InvalidParameter(_) | Error::ZeroHasNoBlock | Error::Uncertified => {
            SumrepStatus::InvalidParameter
        }
        Error::Overflow { .. } | Error::CountOverflow { .. } => SumrepStatus::Overflow,
        Error::WindowEmpty { .. } => SumrepStatus::WindowEmpty,
        Error::OutsideWindow { .. } => SumrepStatus::OutsideWindow,
        Error::PrefixTooShort { .. } => SumrepStatus::PrefixTooShort,
        Error::NoWitness { .. } | Error::EmptyBlock { .. } | Error::InvalidWitness { .. } => {
            SumrepStatus::NoWitness
        }
        Error::Parse { .. } => SumrepStatus::ParseError,
        Error::Io(_) => SumrepStatus::IoError,
        Error::EmptySet => SumrepStatus::EmptySet,
    }
}

/// Runs `f`, mapping library errors and panics to status codes.
fn guard<F>(f: F) -> SumrepStatus
where
    F: FnOnce() -> Result<(), (SumrepStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SumrepStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            SumrepStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (SumrepStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SumrepStatus, String) {
    (SumrepStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn set_ref<'a>(set: *const SumrepSet) -> Result<&'a IntegerSet, (SumrepStatus, String)> {
    set.as_ref().map(|s| &s.0).ok_or_else(|| null("set"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (SumrepStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sumrep_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn sumrep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a set from signed values; negatives are rejected with
/// `SUMREP_STATUS_NEGATIVE_ELEMENT`. `values` may be NULL when `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn sumrep_set_from_i64(
    values: *const i64,
    len: usize,
    out: *mut *mut SumrepSet,
) -> SumrepStatus {
    guard(|| {
        let slice = if len == 0 {
            &[][..]
        } else if values.is_null() {
            return Err(null("values"));
        } else {
            std::slice::from_raw_parts(values, len)
        };
        let set = IntegerSet::from_values(slice).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(SumrepSet(set))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn sumrep_set_from_u64(
    values: *const u64,
    len: usize,
    out: *mut *mut SumrepSet,
) -> SumrepStatus {
    guard(|| {
        let v = if len == 0 {
            Vec::new()
        } else if values.is_null() {
            return Err(null("values"));
        } else {
            std::slice::from_raw_parts(values, len).to_vec()
        };
        write_out(
            out,
            Box::into_raw(Box::new(SumrepSet(IntegerSet::from_unsorted(v)))),
        )
    })
}

/// Loads a set file (one integer per line, `#` comments).
#[no_mangle]
pub unsafe extern "C" fn sumrep_set_load(
    path: *const c_char,
    out: *mut *mut SumrepSet,
) -> SumrepStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| {
            (
                SumrepStatus::InvalidParameter,
                "path is not UTF-8".to_string(),
            )
        })?;
        let set = IntegerSet::load(path).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(SumrepSet(set))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn sumrep_set_free(set: *mut SumrepSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of elements; 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn sumrep_set_len(set: *const SumrepSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the sorted elements into `buf`. `*written` receives the set size;
/// if `cap` is smaller nothing is copied and `SUMREP_STATUS_BUFFER_TOO_SMALL`
/// is returned.
#[no_mangle]
pub unsafe extern "C" fn sumrep_set_elements(
    set: *const SumrepSet,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> SumrepStatus {
    guard(|| {
        let s = set_ref(set)?;
        write_out(written, s.len())?;
        if cap < s.len() {
            return Err((
                SumrepStatus::BufferTooSmall,
                format!("need {} slots", s.len()),
            ));
        }
        if !s.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(s.elements().as_ptr(), buf, s.len());
        }
        Ok(())
    })
}

/// Counting function `A(x)`: elements `a` with `1 <= a <= x`.
#[no_mangle]
pub unsafe extern "C" fn sumrep_counting(
    set: *const SumrepSet,
    x: u64,
    out: *mut u64,
) -> SumrepStatus {
    guard(|| write_out(out, set_ref(set)?.counting(x)))
}

/// Block index `k` with `h^(k-1) <= a < h^k`.
#[no_mangle]
pub unsafe extern "C" fn sumrep_block_of(a: u64, h: u64, out: *mut u32) -> SumrepStatus {
    guard(|| write_out(out, sumrep::block_of(a, h).map_err(lib_err)?))
}

#[no_mangle]
pub unsafe extern "C" fn sumrep_rep_count(
    set: *const SumrepSet,
    h: u64,
    n: u64,
    out: *mut u64,
) -> SumrepStatus {
    guard(|| {
        write_out(
            out,
            sumrep::rep_count(set_ref(set)?, h, n).map_err(lib_err)?,
        )
    })
}

/// Exhaustive-enumeration oracle; exponential in `h`.
#[no_mangle]
pub unsafe extern "C" fn sumrep_rep_count_naive(
    set: *const SumrepSet,
    h: u64,
    n: u64,
    out: *mut u64,
) -> SumrepStatus {
    guard(|| write_out(out, sumrep::rep_count_naive(set_ref(set)?, h, n)))
}

/// Writes `r(n)` for `n = lo, lo+1, ...` up to `min(hi, h max A)` into
/// `buf`; `*written` receives the number of entries.
#[no_mangle]
pub unsafe extern "C" fn sumrep_rep_table(
    set: *const SumrepSet,
    h: u64,
    lo: u64,
    hi: u64,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> SumrepStatus {
    guard(|| {
        let table = sumrep::rep_table(set_ref(set)?, h, lo, hi, None).map_err(lib_err)?;
        let len = table.counts.len();
        write_out(written, len)?;
        if cap < len {
            return Err((SumrepStatus::BufferTooSmall, format!("need {len} slots")));
        }
        if len > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            ptr::copy_nonoverlapping(table.counts.as_ptr(), buf, len);
        }
        Ok(())
    })
}

/// `*holds` is true iff `r_{A,h}(n) <= s` on the exactness window.
#[no_mangle]
pub unsafe extern "C" fn sumrep_is_bhs(
    set: *const SumrepSet,
    h: u64,
    s: u64,
    mode: SumrepMode,
    holds: *mut bool,
) -> SumrepStatus {
    guard(|| {
        write_out(
            holds,
            is_bhs(set_ref(set)?, h, s, mode.into())
                .map_err(lib_err)?
                .holds,
        )
    })
}

/// Least `n0` for which `r_{A,h}(n) >= ell` holds on `[n0, bound]`;
/// `*found` is false when no such threshold exists.
#[no_mangle]
pub unsafe extern "C" fn sumrep_min_threshold(
    set: *const SumrepSet,
    h: u64,
    ell: u64,
    mode: SumrepMode,
    found: *mut bool,
    n0: *mut u64,
) -> SumrepStatus {
    guard(|| {
        let t = min_threshold(set_ref(set)?, h, ell, mode.into()).map_err(lib_err)?;
        write_out(found, t.is_some())?;
        write_out(n0, t.unwrap_or(0))
    })
}

/// Full theorem check. `s` is ignored for T1 and T2; `ell` is ignored for
/// T1; `h` must be 2 for T2. A negative `n0` selects the least passing
/// threshold.
#[no_mangle]
pub unsafe extern "C" fn sumrep_theorem_run(
    set: *const SumrepSet,
    theorem: SumrepTheorem,
    h: u64,
    ell: u64,
    s: u64,
    mode: SumrepMode,
    n0: i64,
    out: *mut *mut SumrepReport,
) -> SumrepStatus {
    guard(|| {
        let a = set_ref(set)?;
        let params = match theorem {
            SumrepTheorem::T1 => TheoremParams::t1(h),
            SumrepTheorem::T2 => TheoremParams {
                id: TheoremId::T2,
                h,
                ell,
                s: 1,
            },
            SumrepTheorem::T3 => TheoremParams::t3(h, ell, s),
        };
        let n0 = u64::try_from(n0).ok();
        let report = sumrep::run_theorem(a, &params, mode.into(), n0).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(SumrepReport(report))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn sumrep_report_free(report: *mut SumrepReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// True iff the verdict is pass; false for NULL.
#[no_mangle]
pub unsafe extern "C" fn sumrep_report_passed(report: *const SumrepReport) -> bool {
    report.as_ref().is_some_and(|r| r.0.verdict.pass)
}

/// `k0` and `n0` of the report; `*has` is false if the run stopped before
/// they were determined.
#[no_mangle]
pub unsafe extern "C" fn sumrep_report_k0(
    report: *const SumrepReport,
    has: *mut bool,
    n0: *mut u64,
    k0: *mut u32,
) -> SumrepStatus {
    guard(|| {
        let r = &report.as_ref().ok_or_else(|| null("report"))?.0;
        write_out(has, r.k0.is_some())?;
        write_out(n0, r.n0.unwrap_or(0))?;
        write_out(k0, r.k0.unwrap_or(0))
    })
}

/// `w0 = numer / denom` (reduced); `*has` as for `sumrep_report_k0`.
#[no_mangle]
pub unsafe extern "C" fn sumrep_report_w0(
    report: *const SumrepReport,
    has: *mut bool,
    numer: *mut u64,
    denom: *mut u64,
) -> SumrepStatus {
    guard(|| {
        let r = &report.as_ref().ok_or_else(|| null("report"))?.0;
        write_out(has, r.w0.is_some())?;
        write_out(numer, r.w0.map_or(0, |w| w.numer))?;
        write_out(denom, r.w0.map_or(1, |w| w.denom))
    })
}

/// The report as JSON. Free with `sumrep_string_free`. NULL on failure.
#[no_mangle]
pub unsafe extern "C" fn sumrep_report_to_json(report: *const SumrepReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => CString::new(r.0.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => {
            set_last_error("null pointer: report".into());
            ptr::null_mut()
        }
    }
}

#[no_mangle]
pub unsafe extern "C" fn sumrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
