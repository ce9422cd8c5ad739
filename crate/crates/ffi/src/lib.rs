//! C ABI over `polyzeta`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`PzStatus`]; on failure, [`pz_last_error_message`] describes the error for
//! the calling thread. Strings returned through `char **` out-parameters are
//! owned by the caller and released with [`pz_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polyzeta::group::{pair, random_grouplike, NcSeries};
use polyzeta::numerics::ApproxComplex;
use polyzeta::series::eps_for_digits;
use polyzeta::transforms::{apply_transform, box_op, nabla, TransformKind};
use polyzeta::words::{Composition, WordPoly};
use polyzeta::zeta::{compute, zeta_pm_eps, zeta_reg_eps, EngineConfig, Method, PmSign, ZetaInput, ZetaRequest};
use polyzeta::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PzStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Divergent = 3,
    Precondition = 4,
    Precision = 5,
    InvalidUtf8 = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PzTransform {
    Box = 0,
    Nabla = 1,
    Sigma = 2,
    Tau = 3,
    SigmaPrime = 4,
}

/// `None` selects the regularized value; `Plus`/`Minus` select the values
/// with `a ↦ ±iπ`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PzSign {
    None = 0,
    Plus = 1,
    Minus = 2,
}

/// A word polynomial with rational coefficients.
pub struct PzPoly(WordPoly);

/// A certified value with its error radius.
pub struct PzValue {
    value: ApproxComplex,
    digits: u32,
    terms_used: u64,
}

/// A truncated noncommutative series.
pub struct PzSeries(NcSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PzStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let status = match &e {
            Error::Parse(_) | Error::NotInWPlus(_) | Error::WordTooLong(_) => PzStatus::Parse,
            Error::Divergent(_) => PzStatus::Divergent,
            Error::PrecisionNotCertified { .. } | Error::PrecisionUnreachable { .. } => PzStatus::Precision,
            Error::Io(_) | Error::Json(_) => PzStatus::Io,
            _ => PzStatus::Precondition,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PzStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PzStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(PzStatus::NullPointer, "null pointer argument".into())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(PzStatus::InvalidUtf8, "string argument is not valid UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).map_err(|_| Failure(PzStatus::Panic, "string contains NUL".into()))?.into_raw();
    Ok(())
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses text such as `"ab - 2*aab + 1/3*b"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_parse(text: *const c_char, out: *mut *mut PzPoly) -> PzStatus {
    guard(|| {
        let p: WordPoly = read_str(text)?.parse()?;
        write_out(out, PzPoly(p))
    })
}

/// # Safety
/// `p` must be NULL or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_free(p: *mut PzPoly) {
    free_box(p)
}

/// # Safety
/// `p` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_to_string(p: *const PzPoly, out: *mut *mut c_char) -> PzStatus {
    guard(|| write_string(out, borrow(p)?.0.to_string()))
}

/// # Safety
/// `a`, `b` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_shuffle(a: *const PzPoly, b: *const PzPoly, out: *mut *mut PzPoly) -> PzStatus {
    guard(|| {
        let s = borrow(a)?.0.shuffle(&borrow(b)?.0);
        write_out(out, PzPoly(s))
    })
}

/// # Safety
/// `p` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_poly_transform(p: *const PzPoly, kind: PzTransform, out: *mut *mut PzPoly) -> PzStatus {
    guard(|| {
        let h = &borrow(p)?.0;
        let image = match kind {
            PzTransform::Box => box_op(h),
            PzTransform::Nabla => nabla(h),
            PzTransform::Sigma => apply_transform(TransformKind::Sigma, h),
            PzTransform::Tau => apply_transform(TransformKind::Tau, h),
            PzTransform::SigmaPrime => apply_transform(TransformKind::SigmaPrime, h),
        };
        write_out(out, PzPoly(image))
    })
}

/// `ζ(parts[0], ..., parts[len-1])` to `digits` certified digits. `method` is
/// a method name such as `"thm7-half"` or `"cor12"`; NULL selects
/// `"thm7-half"`.
///
/// # Safety
/// `parts` must point to `len` integers; `method` must be NULL or a
/// NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_zeta(
    parts: *const u32,
    len: usize,
    method: *const c_char,
    digits: u32,
    out: *mut *mut PzValue,
) -> PzStatus {
    guard(|| {
        if parts.is_null() && len > 0 {
            return Err(null());
        }
        let parts = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(parts, len).to_vec() };
        let comp = Composition::new(parts)?;
        if comp.is_empty() {
            return Err(Error::Parse("empty composition".into()).into());
        }
        let method = if method.is_null() { Method::Thm7Half } else { read_str(method)?.parse()? };
        let req = ZetaRequest { input: ZetaInput::Composition(comp), method, digits };
        let r = compute(&req, &EngineConfig::default())?;
        write_out(out, PzValue { value: r.value, digits, terms_used: r.terms_used })
    })
}

/// Regularized value of a word polynomial.
///
/// # Safety
/// `p` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_zeta_reg(p: *const PzPoly, sign: PzSign, digits: u32, out: *mut *mut PzValue) -> PzStatus {
    guard(|| {
        let h = &borrow(p)?.0;
        let cfg = EngineConfig::default();
        let eps = eps_for_digits(digits);
        let v = match sign {
            PzSign::None => zeta_reg_eps(h, &eps, &cfg)?,
            PzSign::Plus => zeta_pm_eps(h, &eps, PmSign::Plus, &cfg)?,
            PzSign::Minus => zeta_pm_eps(h, &eps, PmSign::Minus, &cfg)?,
        };
        if !v.value.certifies(digits) {
            return Err(Error::PrecisionNotCertified { digits, radius: v.value.re.bound_string() }.into());
        }
        write_out(out, PzValue { value: v.value, digits, terms_used: v.terms_used })
    })
}

/// Decimal text of the value at its requested digits: `"x"`, `"x + yi"` or
/// `"x - yi"`.
///
/// # Safety
/// `v` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_value_to_string(v: *const PzValue, out: *mut *mut c_char) -> PzStatus {
    guard(|| {
        let v = borrow(v)?;
        write_string(out, polyzeta::cli::format_value(&v.value, v.digits)?)
    })
}

/// Upper bound on the error radius, e.g. `"1.3e-31"`.
///
/// # Safety
/// `v` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_value_error_bound(v: *const PzValue, out: *mut *mut c_char) -> PzStatus {
    guard(|| {
        let v = &borrow(v)?.value;
        let bound = if v.im.radius() > v.re.radius() { v.im.bound_string() } else { v.re.bound_string() };
        write_string(out, bound)
    })
}

/// Series terms summed; 0 for a NULL handle.
///
/// # Safety
/// `v` must be NULL or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn pz_value_terms_used(v: *const PzValue) -> u64 {
    v.as_ref().map_or(0, |v| v.terms_used)
}

/// # Safety
/// `v` must be NULL or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pz_value_free(v: *mut PzValue) {
    free_box(v)
}

/// A seeded random grouplike series truncated at `order` (at most 12).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_series_random_grouplike(order: usize, seed: u64, out: *mut *mut PzSeries) -> PzStatus {
    guard(|| {
        if order > 12 {
            return Err(Error::Precondition(format!("order {order} exceeds 12")).into());
        }
        write_out(out, PzSeries(random_grouplike(order, seed)))
    })
}

/// # Safety
/// `a`, `b` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_series_mul(a: *const PzSeries, b: *const PzSeries, out: *mut *mut PzSeries) -> PzStatus {
    guard(|| {
        let p = polyzeta::group::nc_mul(&borrow(a)?.0, &borrow(b)?.0)?;
        write_out(out, PzSeries(p))
    })
}

/// # Safety
/// `g` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_series_inv(g: *const PzSeries, out: *mut *mut PzSeries) -> PzStatus {
    guard(|| write_out(out, PzSeries(borrow(g)?.0.inv()?)))
}

/// Applies `Sigma`, `Tau` or `SigmaPrime` to a series; `Box` and `Nabla` are
/// rejected.
///
/// # Safety
/// `g` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_series_transform(g: *const PzSeries, kind: PzTransform, out: *mut *mut PzSeries) -> PzStatus {
    guard(|| {
        let kind = match kind {
            PzTransform::Sigma => TransformKind::Sigma,
            PzTransform::Tau => TransformKind::Tau,
            PzTransform::SigmaPrime => TransformKind::SigmaPrime,
            PzTransform::Box | PzTransform::Nabla => {
                return Err(Error::Precondition("box and nabla act on polynomials only".into()).into())
            }
        };
        write_out(out, PzSeries(borrow(g)?.0.transform(kind)))
    })
}

/// # Safety
/// `g` must be a valid handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_series_is_grouplike(g: *const PzSeries, out: *mut bool) -> PzStatus {
    guard(|| {
        let g = borrow(g)?;
        if out.is_null() {
            return Err(null());
        }
        *out = g.0.is_grouplike();
        Ok(())
    })
}

/// Exact pairing `Σ_w coeff(h, w)·coeff(g, w)` as rational text, e.g. `"-3/2"`.
///
/// # Safety
/// `h`, `g` must be valid handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pz_series_pair(h: *const PzPoly, g: *const PzSeries, out: *mut *mut c_char) -> PzStatus {
    guard(|| {
        let q = pair(&borrow(h)?.0, &borrow(g)?.0)?;
        write_string(out, q.to_string())
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pz_series_free(g: *mut PzSeries) {
    free_box(g)
}
