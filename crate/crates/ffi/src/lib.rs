//! C ABI over the `nongauss` library.
//!
//! Conventions:
//! - Every fallible function returns an [`NgStatus`] and writes its result
//!   through an out-pointer. On failure a message is available from
//!   [`ng_last_error_message`] on the same thread.
//! - Distributions are opaque handles created by `ng_distribution_*` and
//!   released with [`ng_distribution_free`].
//! - Panics never cross the boundary; they are reported as
//!   `NG_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nongauss::measures::{self, Measure, MeasureTriple};
use nongauss::specfun::{self, SeriesControl};
use nongauss::states::{self, PhotonNumberDistribution, StateSpec};
use nongauss::{Complex64, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgStatus {
    Ok = 0,
    DomainError = 1,
    ConvergenceError = 2,
    NormalizationError = 3,
    DegenerateError = 4,
    UnsupportedError = 5,
    NullPointer = 6,
    Panic = 7,
}

impl From<&Error> for NgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => NgStatus::DomainError,
            Error::Convergence { .. } => NgStatus::ConvergenceError,
            Error::Normalization(_) => NgStatus::NormalizationError,
            Error::Degenerate(_) => NgStatus::DegenerateError,
            Error::Unsupported(_) => NgStatus::UnsupportedError,
        }
    }
}

/// Series stopping rule; see [`ng_series_control_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NgSeriesControl {
    pub tol: f64,
    pub max_terms: usize,
}

impl TryFrom<NgSeriesControl> for SeriesControl {
    type Error = Error;

    fn try_from(c: NgSeriesControl) -> Result<Self, Error> {
        SeriesControl::new(c.tol, c.max_terms)
    }
}

pub const NG_SUPPORTS_HS: u32 = 1;
pub const NG_SUPPORTS_RE: u32 = 2;
pub const NG_SUPPORTS_F: u32 = 4;

/// The three degrees with their error bounds. Components missing from
/// `supported` are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NgMeasureTriple {
    pub delta_hs: f64,
    pub delta_re: f64,
    pub delta_f: f64,
    pub err_hs: f64,
    pub err_re: f64,
    pub err_f: f64,
    pub supported: u32,
}

impl From<MeasureTriple> for NgMeasureTriple {
    fn from(t: MeasureTriple) -> Self {
        let split = |m: Measure| t.get(m).map_or((f64::NAN, f64::NAN), |e| (e.value, e.err));
        let (hs, ehs) = split(Measure::Hs);
        let (re, ere) = split(Measure::Re);
        let (f, ef) = split(Measure::Fid);
        let mut supported = 0;
        if t.delta_hs.is_some() {
            supported |= NG_SUPPORTS_HS;
        }
        if t.delta_re.is_some() {
            supported |= NG_SUPPORTS_RE;
        }
        if t.delta_f.is_some() {
            supported |= NG_SUPPORTS_F;
        }
        NgMeasureTriple {
            delta_hs: hs,
            delta_re: re,
            delta_f: f,
            err_hs: ehs,
            err_re: ere,
            err_f: ef,
            supported,
        }
    }
}

/// Opaque photon-number distribution.
pub struct NgDistribution(PhotonNumberDistribution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard<F>(f: F) -> NgStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NgStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            NgStatus::from(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer passed as {what}"));
            NgStatus::NullPointer
        }
        Err(_) => {
            set_last_error("panic inside nongauss");
            NgStatus::Panic
        }
    }
}

/// Writes `value` through `out`.
///
/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null and valid for writes per the caller contract.
    unsafe { out.write(value) };
    Ok(())
}

/// # Safety
/// `ptr` must be null or point to `len` readable elements.
unsafe fn slice_in<'a, T>(
    ptr: *const T,
    len: usize,
    what: &'static str,
) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null with `len` readable elements per the caller contract.
    Ok(unsafe { std::slice::from_raw_parts(ptr, len) })
}

/// # Safety
/// `d` must be null or a live handle from `ng_distribution_*`.
unsafe fn handle<'a>(d: *const NgDistribution) -> Result<&'a PhotonNumberDistribution, Failure> {
    // SAFETY: live handle per the caller contract.
    unsafe { d.as_ref() }
        .map(|h| &h.0)
        .ok_or(Failure::Null("distribution"))
}

fn new_handle(d: PhotonNumberDistribution) -> *mut NgDistribution {
    Box::into_raw(Box::new(NgDistribution(d)))
}

/// Default stopping rule: tolerance 1e-12, at most 100000 terms.
#[no_mangle]
pub extern "C" fn ng_series_control_default() -> NgSeriesControl {
    let d = SeriesControl::default();
    NgSeriesControl {
        tol: d.tol,
        max_terms: d.max_terms,
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ng_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn ng_status_name(status: NgStatus) -> *const c_char {
    let name: &'static CStr = match status {
        NgStatus::Ok => c"ok",
        NgStatus::DomainError => c"domain error",
        NgStatus::ConvergenceError => c"convergence error",
        NgStatus::NormalizationError => c"normalization error",
        NgStatus::DegenerateError => c"degenerate input",
        NgStatus::UnsupportedError => c"unsupported",
        NgStatus::NullPointer => c"null pointer",
        NgStatus::Panic => c"panic",
    };
    name.as_ptr()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ng_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Thermal state with mean photon number `nbar`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_thermal(
    nbar: f64,
    ctl: NgSeriesControl,
    out: *mut *mut NgDistribution,
) -> NgStatus {
    guard(|| {
        let d = PhotonNumberDistribution::from_spec(&StateSpec::Thermal { nbar }, ctl.try_into()?)?;
        unsafe { write_out(out, new_handle(d), "out") }
    })
}

/// Number state `|m⟩`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_fock(m: u32, out: *mut *mut NgDistribution) -> NgStatus {
    guard(|| {
        let d =
            PhotonNumberDistribution::from_spec(&StateSpec::Fock { m }, SeriesControl::default())?;
        unsafe { write_out(out, new_handle(d), "out") }
    })
}

/// `m`-photon-added thermal state.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_pats(
    m: u32,
    nbar: f64,
    ctl: NgSeriesControl,
    out: *mut *mut NgDistribution,
) -> NgStatus {
    guard(|| {
        let d = states::pats_probabilities(m, nbar, ctl.try_into()?)?;
        unsafe { write_out(out, new_handle(d), "out") }
    })
}

/// Custom Fock-diagonal state from `len` probabilities.
///
/// # Safety
/// `probs` must point to `len` readable doubles; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_custom(
    probs: *const f64,
    len: usize,
    out: *mut *mut NgDistribution,
) -> NgStatus {
    guard(|| {
        let probs = unsafe { slice_in(probs, len, "probs") }?.to_vec();
        let spec = StateSpec::custom(probs)?;
        let d = PhotonNumberDistribution::from_spec(&spec, SeriesControl::default())?;
        unsafe { write_out(out, new_handle(d), "out") }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_free(d: *mut NgDistribution) {
    if !d.is_null() {
        // SAFETY: allocated by `new_handle` and not yet freed.
        drop(unsafe { Box::from_raw(d) });
    }
}

/// Number of retained levels, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_len(d: *const NgDistribution) -> usize {
    unsafe { handle(d) }.map_or(0, |d| d.len())
}

/// Certified bound on the truncated probability, or NaN for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_tail_mass(d: *const NgDistribution) -> f64 {
    unsafe { handle(d) }.map_or(f64::NAN, |d| d.tail_mass())
}

/// Copies up to `cap` probabilities into `buf` and stores the full length
/// in `len_out`.
///
/// # Safety
/// `d` must be a live handle, `buf` valid for `cap` writes (or null when
/// `cap` is 0) and `len_out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_copy_probs(
    d: *const NgDistribution,
    buf: *mut f64,
    cap: usize,
    len_out: *mut usize,
) -> NgStatus {
    guard(|| {
        let d = unsafe { handle(d) }?;
        let n = d.len().min(cap);
        if n > 0 {
            if buf.is_null() {
                return Err(Failure::Null("buf"));
            }
            // SAFETY: `buf` holds at least `cap >= n` doubles.
            unsafe { ptr::copy_nonoverlapping(d.probs().as_ptr(), buf, n) };
        }
        unsafe { write_out(len_out, d.len(), "len_out") }
    })
}

/// Mean photon number of the distribution.
///
/// # Safety
/// `d` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_mean_occupancy(
    d: *const NgDistribution,
    out: *mut f64,
) -> NgStatus {
    guard(|| {
        let d = unsafe { handle(d) }?;
        unsafe { write_out(out, states::mean_occupancy(d).value, "out") }
    })
}

/// The three degrees computed from the distribution's series against its
/// thermal reference.
///
/// # Safety
/// `d` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_distribution_measures(
    d: *const NgDistribution,
    out: *mut NgMeasureTriple,
) -> NgStatus {
    guard(|| {
        let d = unsafe { handle(d) }?;
        let r = states::reference_thermal(d);
        let t = MeasureTriple {
            delta_hs: Some(measures::delta_hs_diag(d, &r)?),
            delta_re: Some(measures::delta_re_diag(d, &r)),
            delta_f: Some(measures::delta_f_diag(d, &r)),
        };
        unsafe { write_out(out, t.into(), "out") }
    })
}

fn measure_spec(spec: StateSpec, ctl: NgSeriesControl, out: *mut NgMeasureTriple) -> NgStatus {
    guard(|| {
        let t = measures::measure_all(&spec, ctl.try_into()?)?;
        unsafe { write_out(out, t.into(), "out") }
    })
}

/// Degrees of a thermal state (all zero).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_measure_thermal(
    nbar: f64,
    ctl: NgSeriesControl,
    out: *mut NgMeasureTriple,
) -> NgStatus {
    measure_spec(StateSpec::Thermal { nbar }, ctl, out)
}

/// Degrees of the number state `|m⟩` from closed forms.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_measure_fock(m: u32, out: *mut NgMeasureTriple) -> NgStatus {
    measure_spec(StateSpec::Fock { m }, ng_series_control_default(), out)
}

/// Degrees of the `m`-photon-added thermal state.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_measure_pats(
    m: u32,
    nbar: f64,
    ctl: NgSeriesControl,
    out: *mut NgMeasureTriple,
) -> NgStatus {
    measure_spec(StateSpec::Pats { m, nbar }, ctl, out)
}

/// Degrees of a pure state given by `len` Fock amplitudes `re[l] + i im[l]`.
/// Only `delta_re` is available unless the state is a single number state.
///
/// # Safety
/// `re` and `im` must each point to `len` readable doubles; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_measure_pure(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut NgMeasureTriple,
) -> NgStatus {
    guard(|| {
        let re = unsafe { slice_in(re, len, "re") }?;
        let im = unsafe { slice_in(im, len, "im") }?;
        let coeffs = re
            .iter()
            .zip(im)
            .map(|(a, b)| Complex64::new(*a, *b))
            .collect();
        let t = measures::measure_all(&StateSpec::pure(coeffs)?, SeriesControl::default())?;
        unsafe { write_out(out, t.into(), "out") }
    })
}

/// Closed-form Hilbert–Schmidt degree of the photon-added thermal state.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_delta_hs_pats_closed(m: u32, nbar: f64, out: *mut f64) -> NgStatus {
    guard(|| unsafe { write_out(out, measures::delta_hs_pats_closed(m, nbar)?, "out") })
}

/// Purity of the photon-added thermal state via the Legendre closed form.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_purity_closed(m: u32, nbar: f64, out: *mut f64) -> NgStatus {
    guard(|| unsafe { write_out(out, states::purity_closed(m, nbar)?, "out") })
}

/// Relative-entropy degree of a pure state with covariance determinant `delta`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_delta_re_pure(delta: f64, out: *mut f64) -> NgStatus {
    guard(|| unsafe { write_out(out, measures::delta_re_pure(delta)?, "out") })
}

#[no_mangle]
pub extern "C" fn ng_delta_f_fock(m: u32) -> f64 {
    measures::delta_f_fock(m)
}

#[no_mangle]
pub extern "C" fn ng_delta_hs_fock(m: u32) -> f64 {
    measures::delta_hs_fock(m)
}

#[no_mangle]
pub extern "C" fn ng_pochhammer(a: f64, n: u32) -> f64 {
    specfun::pochhammer(a, n)
}

/// Gauss hypergeometric function `2F1(a, b; c; z)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_gauss_2f1(
    a: f64,
    b: f64,
    c: f64,
    z: f64,
    ctl: NgSeriesControl,
    out: *mut f64,
) -> NgStatus {
    guard(|| unsafe { write_out(out, specfun::gauss_2f1(a, b, c, z, ctl.try_into()?)?, "out") })
}

/// Legendre polynomial `P_m(z)` for `z >= 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ng_legendre_p(m: u32, z: f64, out: *mut f64) -> NgStatus {
    guard(|| unsafe { write_out(out, specfun::legendre_p(m, z)?, "out") })
}
