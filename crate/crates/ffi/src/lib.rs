//! C ABI over `pascalfib`.
//!
//! Every fallible function returns a [`PfStatus`] and writes its result
//! through an out-pointer. On failure the out-pointer is left untouched
//! and `pf_last_error_message` describes the error for the calling
//! thread. Matrices are opaque [`PfMatrix`] handles released with
//! `pf_matrix_free`; strings returned by the library are released with
//! `pf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use pascalfib::campaign::{run_campaign, CampaignConfig};
use pascalfib::cli::MatrixDoc;
use pascalfib::{fib, modorder, spectra, Error, ExactMatrix, PascalKind, Verdict};

pub const PF_KIND_LEFT: u32 = 0;
pub const PF_KIND_RIGHT: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrime = 3,
    NotUnimodular = 4,
    DimensionMismatch = 5,
    Singular = 6,
    Parse = 7,
    Overflow = 8,
    Panic = 9,
    Internal = 10,
}

/// Exact integer matrix.
pub struct PfMatrix {
    inner: ExactMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(PfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ZeroDimension
            | Error::BadShape { .. }
            | Error::BadModulus(_)
            | Error::Precondition(_)
            | Error::IndexOutOfRange { .. } => PfStatus::InvalidArgument,
            Error::NotPrime(_) => PfStatus::NotPrime,
            Error::NotUnimodular { .. } => PfStatus::NotUnimodular,
            Error::DimensionMismatch { .. } | Error::ModulusMismatch { .. } => PfStatus::DimensionMismatch,
            Error::SingularModP(_) => PfStatus::Singular,
            Error::Parse(_) => PfStatus::Parse,
            Error::BoundNotAnnihilating(_) => PfStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: PfStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

/// Runs `body`, turning errors and panics into a status code.
fn guard<F>(body: F) -> PfStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_last_error(format!("internal panic: {msg}"));
            PfStatus::Panic
        }
    }
}

fn out_ptr<'a, T>(out: *mut T) -> Result<&'a mut T, Failure> {
    // SAFETY: non-null out-pointers are required to be valid for writes.
    unsafe { out.as_mut() }.map_or_else(|| fail(PfStatus::NullPointer, "null output pointer"), Ok)
}

fn matrix_ref<'a>(m: *const PfMatrix) -> Result<&'a ExactMatrix, Failure> {
    // SAFETY: non-null handles come from this library and are live.
    match unsafe { m.as_ref() } {
        Some(m) => Ok(&m.inner),
        None => fail(PfStatus::NullPointer, "null matrix handle"),
    }
}

fn c_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return fail(PfStatus::NullPointer, "null string");
    }
    // SAFETY: caller passes a nul-terminated string.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Failure(PfStatus::Parse, "string is not UTF-8".into()))
}

fn new_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(PfStatus::Internal, "string contains a nul byte".into()))
}

fn new_matrix(m: ExactMatrix) -> *mut PfMatrix {
    Box::into_raw(Box::new(PfMatrix { inner: m }))
}

fn parse_kind(k: u32) -> Result<PascalKind, Failure> {
    match k {
        PF_KIND_LEFT => Ok(PascalKind::Left),
        PF_KIND_RIGHT => Ok(PascalKind::Right),
        other => fail(PfStatus::InvalidArgument, format!("unknown matrix kind {other}")),
    }
}

/// Message for the last failing call on this thread, or NULL. Owned by
/// the library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn pf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `m` must be NULL or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_free(m: *mut PfMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `L_n` (`kind = PF_KIND_LEFT`) or `R_n` (`kind = PF_KIND_RIGHT`).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_pascal(kind: u32, n: usize, out: *mut *mut PfMatrix) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = new_matrix(parse_kind(kind)?.build(n)?);
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_identity(n: usize, out: *mut *mut PfMatrix) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = new_matrix(ExactMatrix::identity(n)?);
        Ok(())
    })
}

/// Matrix from `len = n * n` row-major entries.
///
/// # Safety
/// `entries` must point to `len` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_from_i64(
    n: usize,
    entries: *const i64,
    len: usize,
    out: *mut *mut PfMatrix,
) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        if entries.is_null() {
            return fail(PfStatus::NullPointer, "null entries");
        }
        let values = std::slice::from_raw_parts(entries, len);
        let m = ExactMatrix::new(n, values.iter().map(|&v| v.into()).collect())?;
        *out = new_matrix(m);
        Ok(())
    })
}

/// Parses the JSON matrix document written by `pf_matrix_to_json`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_from_json(json: *const c_char, out: *mut *mut PfMatrix) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let doc: MatrixDoc =
            serde_json::from_str(c_str(json)?).map_err(|e| Failure(PfStatus::Parse, e.to_string()))?;
        *out = new_matrix(doc.to_exact()?);
        Ok(())
    })
}

/// Dimension of `m`, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_dim(m: *const PfMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// Entry `(i, j)` (1-based) as a decimal string.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_entry(m: *const PfMatrix, i: usize, j: usize, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let v = matrix_ref(m)?.try_get(i, j)?;
        *out = new_string(v.to_string())?;
        Ok(())
    })
}

/// Entry `(i, j)` (1-based); `PF_STATUS_OVERFLOW` if it does not fit.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_entry_i64(m: *const PfMatrix, i: usize, j: usize, out: *mut i64) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let v = matrix_ref(m)?.try_get(i, j)?;
        *out = i64::try_from(v).map_err(|_| Failure(PfStatus::Overflow, format!("{v} does not fit in i64")))?;
        Ok(())
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_mul(a: *const PfMatrix, b: *const PfMatrix, out: *mut *mut PfMatrix) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = new_matrix(matrix_ref(a)?.mul(matrix_ref(b)?)?);
        Ok(())
    })
}

/// `m^e`; negative `e` requires `m` to be unimodular.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_pow(m: *const PfMatrix, e: i64, out: *mut *mut PfMatrix) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = new_matrix(matrix_ref(m)?.pow(e)?);
        Ok(())
    })
}

/// `m^e mod p` with entries in `[0, p)`; `p` must be prime.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_pow_mod(m: *const PfMatrix, e: i64, p: u64, out: *mut *mut PfMatrix) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let m = matrix_ref(m)?;
        if !pascalfib::matrix::primes::is_prime(p) {
            return Err(Error::NotPrime(p).into());
        }
        let base = if e < 0 { m.unimodular_inverse()? } else { m.clone() };
        let r = base.to_mod(p)?.pow(e.unsigned_abs());
        let n = r.dim();
        *out = new_matrix(ExactMatrix::new(n, r.entries().iter().map(|&v| v.into()).collect())?);
        Ok(())
    })
}

/// Exact inverse of a unimodular matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_inverse(m: *const PfMatrix, out: *mut *mut PfMatrix) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = new_matrix(matrix_ref(m)?.unimodular_inverse()?);
        Ok(())
    })
}

/// Determinant as a decimal string.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_det(m: *const PfMatrix, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = new_string(matrix_ref(m)?.det().to_string())?;
        Ok(())
    })
}

/// Characteristic polynomial `det(xI - m)` as a JSON array of decimal
/// strings, constant term first.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_charpoly(m: *const PfMatrix, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let poly = matrix_ref(m)?.charpoly();
        let coeffs: Vec<String> = poly.coeffs().iter().map(|c| c.to_string()).collect();
        *out = new_string(serde_json::to_string(&coeffs).expect("strings serialize"))?;
        Ok(())
    })
}

/// # Safety
/// `a`, `b` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_equal(a: *const PfMatrix, b: *const PfMatrix, out: *mut bool) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = matrix_ref(a)? == matrix_ref(b)?;
        Ok(())
    })
}

/// `{"n": .., "entries": [["1","0"],..]}` with decimal-string entries.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_matrix_to_json(m: *const PfMatrix, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let doc = MatrixDoc::from_exact(matrix_ref(m)?);
        *out = new_string(serde_json::to_string(&doc).expect("document serializes"))?;
        Ok(())
    })
}

/// Multiplicative order of the Pascal matrix of `kind` and size `n`
/// modulo the prime `p`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_order_mod(kind: u32, n: usize, p: u64, out: *mut u64) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let report = modorder::order_report(parse_kind(kind)?, n, p)?;
        *out = report
            .order
            .ok_or_else(|| Failure(PfStatus::Internal, "order search did not terminate".into()))?;
        Ok(())
    })
}

/// Full order report, including the theorem checks, as JSON.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_order_report_json(kind: u32, n: usize, p: u64, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let report = modorder::order_report(parse_kind(kind)?, n, p)?;
        *out = new_string(serde_json::to_string(&report).expect("report serializes"))?;
        Ok(())
    })
}

/// `F_k` as a decimal string.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_fib(k: u64, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = new_string(fib::fib(k).to_string())?;
        Ok(())
    })
}

/// `L_k` as a decimal string.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_lucas(k: u64, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = new_string(fib::lucas(k).to_string())?;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_entry_point(m: u64, out: *mut u64) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = fib::entry_point(m)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_pisano_period(m: u64, out: *mut u64) -> PfStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = fib::pisano_period(m)?;
        Ok(())
    })
}

/// Compares the characteristic polynomial of `R_n` with the product of
/// Lucas-number quadratics.
///
/// # Safety
/// `out_holds` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_check_eigen_conjecture(n: usize, out_holds: *mut bool) -> PfStatus {
    guard(|| {
        let out = out_ptr(out_holds)?;
        *out = spectra::check_eigen_conjecture(n)?.verdict == Verdict::Pass;
        Ok(())
    })
}

/// Runs a verification campaign described by a JSON config and returns
/// the report rendered in the config's `output_format`. A campaign with
/// failing checks still returns `PF_STATUS_OK`; inspect `out_all_passed`.
///
/// # Safety
/// `config_json` must be a nul-terminated string; both out-pointers must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pf_verify(
    config_json: *const c_char,
    out_report: *mut *mut c_char,
    out_all_passed: *mut bool,
) -> PfStatus {
    guard(|| {
        let report_out = out_ptr(out_report)?;
        let passed_out = out_ptr(out_all_passed)?;
        let cfg = CampaignConfig::from_json(c_str(config_json)?)?;
        let report = run_campaign(&cfg)?;
        *report_out = new_string(report.render(cfg.output_format))?;
        *passed_out = report.all_passed();
        Ok(())
    })
}
