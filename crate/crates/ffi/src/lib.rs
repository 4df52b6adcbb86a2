//! C ABI over `n3l`.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Every fallible call returns an [`N3lStatus`]; on failure a description is
//! kept per thread and read back with [`n3l_last_error`]. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`n3l_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use n3l::bounds::paper_bound;
use n3l::claims::{run_claim, ClaimId};
use n3l::compression::{gap_squared, CompressionScale, CompressionVector};
use n3l::geometry::{verify_no_three, BoundingBox, GridPoint, PointSet, Verdict};
use n3l::pointfile::parse_points;
use n3l::rational::{fmt_rational, parse_rational, parse_rational_list};
use n3l::solver::{exact_max, SolveOptions, SolveResult};
use n3l::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum N3lStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ContractViolation = 3,
    Domain = 4,
    DegenerateBall = 5,
    DegenerateLine = 6,
    Internal = 7,
    Parse = 8,
    Io = 9,
    Panic = 10,
}

/// A verified-or-not point set.
pub struct N3lPointSet(PointSet);

/// Outcome of [`n3l_solve`].
pub struct N3lSolveResult(SolveResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> N3lStatus {
    match e {
        Error::ContractViolation(_) => N3lStatus::ContractViolation,
        Error::Domain(_) => N3lStatus::Domain,
        Error::DegenerateBall(_) => N3lStatus::DegenerateBall,
        Error::DegenerateLine(_) => N3lStatus::DegenerateLine,
        Error::Internal(_) => N3lStatus::Internal,
        Error::Parse { .. } => N3lStatus::Parse,
        Error::Io(_) => N3lStatus::Io,
    }
}

struct Fail(N3lStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(N3lStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> N3lStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            N3lStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside n3l");
            N3lStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(N3lStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(N3lStatus::Internal, "string has interior nul".into()))?;
    write_out(out, c.into_raw())
}

/// Description of the last failure on this thread, or an empty string. Valid
/// until the next n3l call on the same thread.
#[no_mangle]
pub extern "C" fn n3l_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from an n3l out-parameter and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn n3l_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a point set from `count` points of `dim` coordinates each, laid
/// out row-major in `coords`.
///
/// # Safety
/// `coords` must point to `dim * count` readable values (may be null when
/// `count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn n3l_point_set_new(
    dim: usize,
    coords: *const i64,
    count: usize,
    out: *mut *mut N3lPointSet,
) -> N3lStatus {
    guard(|| {
        let flat: &[i64] = if count == 0 {
            &[]
        } else if coords.is_null() {
            return Err(null("coords"));
        } else {
            let len = dim
                .checked_mul(count)
                .ok_or_else(|| Fail(N3lStatus::ContractViolation, "dim * count overflows".into()))?;
            std::slice::from_raw_parts(coords, len)
        };
        let points = flat
            .chunks(dim.max(1))
            .map(|c| GridPoint::new(c.to_vec()))
            .collect::<n3l::Result<Vec<_>>>()?;
        let set = if points.is_empty() {
            PointSet::new(dim, BoundingBox::cube(0, 0, dim), points)?
        } else {
            PointSet::from_points(dim, points)?
        };
        write_out(out, Box::into_raw(Box::new(N3lPointSet(set))))
    })
}

/// Parses points-file text. `dim_hint` of 0 means no hint.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn n3l_point_set_parse(
    text: *const c_char,
    dim_hint: usize,
    out: *mut *mut N3lPointSet,
) -> N3lStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let set = parse_points(text, (dim_hint > 0).then_some(dim_hint))?;
        write_out(out, Box::into_raw(Box::new(N3lPointSet(set))))
    })
}

/// # Safety
/// `set` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn n3l_point_set_free(set: *mut N3lPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of points, or 0 for null.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn n3l_point_set_len(set: *const N3lPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Dimension, or 0 for null.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn n3l_point_set_dim(set: *const N3lPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.dim())
}

/// Copies the coordinates of point `index` into `buf`, which holds `buf_len`
/// values and must fit the dimension.
///
/// # Safety
/// `set` must be a live handle and `buf` writable for `buf_len` values.
#[no_mangle]
pub unsafe extern "C" fn n3l_point_set_point(
    set: *const N3lPointSet,
    index: usize,
    buf: *mut i64,
    buf_len: usize,
) -> N3lStatus {
    guard(|| {
        let set = &set.as_ref().ok_or_else(|| null("set"))?.0;
        let p = set
            .iter()
            .nth(index)
            .ok_or_else(|| Fail(N3lStatus::ContractViolation, format!("index {index} out of range")))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if buf_len < p.dim() {
            return Err(Fail(N3lStatus::ContractViolation, format!("buffer of {buf_len} for dimension {}", p.dim())));
        }
        ptr::copy_nonoverlapping(p.coords().as_ptr(), buf, p.dim());
        Ok(())
    })
}

/// Checks `set` for collinear triples. On failure and when `witness` is not
/// null, the triple is written there as `3 * dim` coordinates.
///
/// # Safety
/// `set` must be a live handle, `pass` writable, `witness` null or writable
/// for `3 * dim` values.
#[no_mangle]
pub unsafe extern "C" fn n3l_verify(set: *const N3lPointSet, pass: *mut bool, witness: *mut i64) -> N3lStatus {
    guard(|| {
        let set = &set.as_ref().ok_or_else(|| null("set"))?.0;
        match verify_no_three(set) {
            Verdict::Pass => write_out(pass, true),
            Verdict::Fail(triple) => {
                if !witness.is_null() {
                    let d = set.dim();
                    for (i, p) in triple.iter().enumerate() {
                        ptr::copy_nonoverlapping(p.coords().as_ptr(), witness.add(i * d), d);
                    }
                }
                write_out(pass, false)
            }
        }
    })
}

/// Exact maximum over `{1..n}^d`. `time_limit_ms` of 0 means unlimited.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn n3l_solve(
    n: u64,
    d: usize,
    threads: usize,
    time_limit_ms: u64,
    symmetry: bool,
    out: *mut *mut N3lSolveResult,
) -> N3lStatus {
    guard(|| {
        let opts = SolveOptions {
            time_limit: (time_limit_ms > 0).then(|| Duration::from_millis(time_limit_ms)),
            threads,
            symmetry_reduction: symmetry,
        };
        let r = exact_max(n, d, &opts)?;
        write_out(out, Box::into_raw(Box::new(N3lSolveResult(r))))
    })
}

/// # Safety
/// `r` must come from [`n3l_solve`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn n3l_solve_result_free(r: *mut N3lSolveResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Size of the best set found, or 0 for null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn n3l_solve_result_max(r: *const N3lSolveResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.max_count)
}

/// Whether the search completed, or false for null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn n3l_solve_result_optimal(r: *const N3lSolveResult) -> bool {
    r.as_ref().is_some_and(|r| r.0.optimal)
}

/// Copies the witness into a new point set handle.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn n3l_solve_result_witness(r: *const N3lSolveResult, out: *mut *mut N3lPointSet) -> N3lStatus {
    guard(|| {
        let r = &r.as_ref().ok_or_else(|| null("result"))?.0;
        write_out(out, Box::into_raw(Box::new(N3lPointSet(r.witness.clone()))))
    })
}

/// Exact squared gap of `x` (comma-separated rationals such as `"2,3"`) at
/// scale `m` (`"p/q"`), written as a `"p/q"` string.
///
/// # Safety
/// `x` and `m` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn n3l_gap_squared(x: *const c_char, m: *const c_char, out: *mut *mut c_char) -> N3lStatus {
    guard(|| {
        let x = CompressionVector::from_rationals(parse_rational_list(read_str(x, "x")?)?)?;
        let m = CompressionScale::new(parse_rational(read_str(m, "m")?)?)?;
        write_string(out, fmt_rational(&gap_squared(&x, &m)?))
    })
}

/// Runs a claim check and writes its report as JSON. `n` of 0 means
/// `max_coord` for the gap-shell claim.
///
/// # Safety
/// `claim` and `scale` must be nul-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn n3l_claim_report(
    claim: *const c_char,
    d: usize,
    max_coord: u64,
    scale: *const c_char,
    n: u64,
    out: *mut *mut c_char,
) -> N3lStatus {
    guard(|| {
        let claim: ClaimId = read_str(claim, "claim")?.parse()?;
        let m = parse_rational(read_str(scale, "scale")?)?;
        let report = run_claim(claim, d, max_coord, m, (n > 0).then_some(n), None)?;
        write_string(out, report.to_json())
    })
}

/// `n^(d−1) · d^(1/(2d))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn n3l_paper_bound(n: u64, d: usize, out: *mut f64) -> N3lStatus {
    guard(|| write_out(out, paper_bound(n, d)?))
}
