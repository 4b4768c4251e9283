//! C ABI for the dedekind-cluster library.
//!
//! Conventions: every fallible call returns a [`DcStatus`]; results come
//! back through out-pointers. Exact rationals cross the boundary as
//! NUL-terminated `"p/q"` strings allocated by this library — release them
//! with [`dc_string_free`]. A failing call stores a message retrievable via
//! [`dc_last_error_message`] (thread-local, valid until the next failing
//! call on the same thread).

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;

use dedekind_cluster::asymptotics::{
    cluster_value, integer_part, required_nhat, cluster_check, verify_mirror_identity, verify_shift_identity,
    verify_ksequence_values, verify_shifted_ksequence,
};
use dedekind_cluster::dedekind::{bhk, s_reciprocity};
use dedekind_cluster::format::{format_rational, parse_decimal};
use dedekind_cluster::numerics::{fredholm_enclosure, Int, Interval};
use dedekind_cluster::shallit::{check_symmetry, Expansion, Symmetry};
use dedekind_cluster::Error;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcStatus {
    /// Success.
    Ok = 0,
    /// An argument was outside the mathematical domain or malformed.
    InvalidArgument = 1,
    /// A required pointer was null.
    NullPointer = 2,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 3,
    /// Disjointness could not be decided at the refinement cap.
    Undecided = 4,
    /// An internal consistency check failed.
    InternalError = 5,
}

/// Opaque handle to a partial-quotient expansion of `x(b)`.
pub struct DcExpansion {
    inner: Expansion,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("no error").unwrap());
}

fn fail_with(status: DcStatus, message: &str) -> DcStatus {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
    status
}

fn fail(err: &Error) -> DcStatus {
    let status = match err {
        Error::DistinctnessUndecided => DcStatus::Undecided,
        Error::Internal(_) => DcStatus::InternalError,
        _ => DcStatus::InvalidArgument,
    };
    fail_with(status, &err.to_string())
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn export_string(value: String, out: *mut *mut c_char) -> DcStatus {
    match CString::new(value) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            DcStatus::Ok
        }
        Err(_) => fail_with(DcStatus::InternalError, "string contained a NUL byte"),
    }
}

/// Release a string allocated by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through one of the string
/// out-parameters, not yet freed; null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn dc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn parse_eps(eps: *const c_char) -> Result<dedekind_cluster::Rational, DcStatus> {
    if eps.is_null() {
        return Err(fail_with(DcStatus::NullPointer, "eps is null"));
    }
    let text = CStr::from_ptr(eps)
        .to_str()
        .map_err(|_| fail_with(DcStatus::InvalidUtf8, "eps is not valid UTF-8"))?;
    parse_decimal(text).map_err(|e| fail(&e))
}

unsafe fn export_interval(
    interval: &Interval,
    out_lo: *mut *mut c_char,
    out_hi: *mut *mut c_char,
) -> DcStatus {
    if out_lo.is_null() || out_hi.is_null() {
        return fail_with(DcStatus::NullPointer, "output pointer is null");
    }
    let status = export_string(format_rational(interval.lo()), out_lo);
    if status != DcStatus::Ok {
        return status;
    }
    let status = export_string(format_rational(interval.hi()), out_hi);
    if status != DcStatus::Ok {
        dc_string_free(*out_lo);
        *out_lo = std::ptr::null_mut();
    }
    status
}

/// Build the expansion of `x(b)` with `2^level` partial quotients.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dc_expansion_new(
    b: u64,
    level: u32,
    out: *mut *mut DcExpansion,
) -> DcStatus {
    if out.is_null() {
        return fail_with(DcStatus::NullPointer, "out is null");
    }
    match Expansion::new(b, level) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(DcExpansion { inner }));
            DcStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Release an expansion handle; null is accepted and ignored.
///
/// # Safety
/// `e` must come from `dc_expansion_new` and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn dc_expansion_free(e: *mut DcExpansion) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Number of stored partial quotients.
///
/// # Safety
/// `e` must be a live handle from `dc_expansion_new`.
#[no_mangle]
pub unsafe extern "C" fn dc_expansion_len(e: *const DcExpansion) -> u64 {
    if e.is_null() {
        return 0;
    }
    (*e).inner.len() as u64
}

/// The partial quotient `a_k` (1-based).
///
/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_expansion_quotient(
    e: *const DcExpansion,
    k: u64,
    out: *mut u64,
) -> DcStatus {
    if e.is_null() || out.is_null() {
        return fail_with(DcStatus::NullPointer, "null pointer");
    }
    match (*e).inner.quotient(k as usize) {
        Ok(a) => {
            *out = a;
            DcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// The alternating integer part `L(k) = sum_{j<=k} (-1)^(j-1) a_j`.
///
/// # Safety
/// `e` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_integer_part(
    e: *const DcExpansion,
    k: u64,
    out: *mut i64,
) -> DcStatus {
    if e.is_null() || out.is_null() {
        return fail_with(DcStatus::NullPointer, "null pointer");
    }
    match integer_part(&(*e).inner, k as usize) {
        Ok(l) => {
            *out = l;
            DcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Classical Dedekind sum of a coprime pair: writes `s(m/n)` and
/// `S(m/n) = 12 s(m/n)` as `"p/q"` strings.
///
/// # Safety
/// `out_s` and `out_scaled` must be writable pointer slots.
#[no_mangle]
pub unsafe extern "C" fn dc_dedekind_sum(
    m: i64,
    n: i64,
    out_s: *mut *mut c_char,
    out_scaled: *mut *mut c_char,
) -> DcStatus {
    if out_s.is_null() || out_scaled.is_null() {
        return fail_with(DcStatus::NullPointer, "output pointer is null");
    }
    match s_reciprocity(&Int::from(m), &Int::from(n)) {
        Ok(v) => {
            let status = export_string(format_rational(v.classical()), out_s);
            if status != DcStatus::Ok {
                return status;
            }
            let status = export_string(format_rational(&v.scaled()), out_scaled);
            if status != DcStatus::Ok {
                dc_string_free(*out_s);
                *out_s = std::ptr::null_mut();
            }
            status
        }
        Err(err) => fail(&err),
    }
}

/// `S(s_k/t_k)` along the expansion, via the closed form, as a `"p/q"`
/// string.
///
/// # Safety
/// `e` must be a live handle; `out_scaled` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_convergent_sum(
    e: *const DcExpansion,
    k: u64,
    out_scaled: *mut *mut c_char,
) -> DcStatus {
    if e.is_null() || out_scaled.is_null() {
        return fail_with(DcStatus::NullPointer, "null pointer");
    }
    match bhk((*e).inner.quotients(), k as usize) {
        Ok(v) => export_string(format_rational(&v.scaled()), out_scaled),
        Err(err) => fail(&err),
    }
}

/// Certified enclosure of `x(b) = sum 1/b^(2^j)` of width at most `eps`
/// (`eps` is an exact decimal such as `"1e-12"`). Writes the two endpoints
/// as `"p/q"` strings.
///
/// # Safety
/// `eps` must be a NUL-terminated string; the out slots must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_fredholm_enclosure(
    b: u64,
    eps: *const c_char,
    out_lo: *mut *mut c_char,
    out_hi: *mut *mut c_char,
) -> DcStatus {
    let eps = match parse_eps(eps) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match fredholm_enclosure(b, &eps) {
        Ok(interval) => export_interval(&interval, out_lo, out_hi),
        Err(err) => fail(&err),
    }
}

/// Enclosure of the cluster value `b - 10 - 2i + x + 1/t(k_{i,l})`.
///
/// # Safety
/// `eps` must be a NUL-terminated string; the out slots must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_cluster_limit(
    b: u64,
    i: u32,
    l: u32,
    eps: *const c_char,
    out_lo: *mut *mut c_char,
    out_hi: *mut *mut c_char,
) -> DcStatus {
    let eps = match parse_eps(eps) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match cluster_value(b, i, l, &eps) {
        Ok(target) => export_interval(&target.limit, out_lo, out_hi),
        Err(err) => fail(&err),
    }
}

/// Desk-scale cluster verification for `(b, i)` with `r` values and shifts
/// up to `nhat_max`: disjoint enclosures inside the predicted interval and
/// strictly improving sampled sums. Writes the overall outcome.
///
/// # Safety
/// `eps` must be a NUL-terminated string; `out_pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_cluster_check(
    b: u64,
    i: u32,
    r: u32,
    eps: *const c_char,
    nhat_max: u64,
    out_pass: *mut bool,
) -> DcStatus {
    if out_pass.is_null() {
        return fail_with(DcStatus::NullPointer, "out_pass is null");
    }
    let eps = match parse_eps(eps) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match cluster_check(b, i, r, &eps, nhat_max as usize) {
        Ok(reports) => {
            *out_pass = reports.iter().all(|rep| rep.passed());
            DcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Run the identity-verification suite (quotient symmetries and the
/// integer-part identities) over the grid `n <= max_n`, `i <= max_i`,
/// `r <= max_r`. Writes whether every check passed.
///
/// # Safety
/// `out_pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_verify_suite(
    b: u64,
    max_n: u64,
    max_i: u32,
    max_r: u32,
    out_pass: *mut bool,
) -> DcStatus {
    if out_pass.is_null() {
        return fail_with(DcStatus::NullPointer, "out_pass is null");
    }
    match run_verify_suite(b, max_n as usize, max_i, max_r) {
        Ok(all) => {
            *out_pass = all;
            DcStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

fn run_verify_suite(
    b: u64,
    max_n: usize,
    max_i: u32,
    max_r: u32,
) -> Result<bool, Error> {
    if !max_n.is_power_of_two() || max_n < 8 {
        return Err(Error::NotPowerOfTwo { value: max_n as u64, min: 8 });
    }
    let deepest = dedekind_cluster::asymptotics::k_seq(max_i, max_n)?.k.max(2 * max_n + max_n / 2);
    let mut exp = Expansion::new(b, 1)?;
    exp.ensure_len(deepest)?;
    let mut all = true;
    let mut n = 4usize;
    while n <= max_n {
        all &= check_symmetry(&exp, Symmetry::Reflection, n)?;
        all &= verify_mirror_identity(&exp, n)?;
        if n >= 8 {
            all &= check_symmetry(&exp, Symmetry::Palindrome, n)?;
            all &= check_symmetry(&exp, Symmetry::Repetition, n)?;
            all &= verify_shift_identity(&exp, n)?;
            all &= verify_ksequence_values(&exp, n, max_i)?;
        }
        n *= 2;
    }
    for i in 0..=max_i {
        for r in 1..=max_r {
            let mut nhat = required_nhat(i, r)?;
            while nhat <= max_n {
                all &= verify_shifted_ksequence(&exp, i, r, nhat)?;
                nhat *= 2;
            }
        }
    }
    Ok(all)
}
