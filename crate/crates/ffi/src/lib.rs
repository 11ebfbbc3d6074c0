//! C ABI over `polya-spectra`.
//!
//! Every fallible function returns a [`PsStatus`] code as `int32_t` and writes results
//! through out-pointers, which are left untouched on failure. The message for the most
//! recent failure on the calling thread is available from [`ps_last_error_message`].
//! Spectra live behind the opaque [`PsSpectrum`] handle, released with
//! [`ps_spectrum_free`].

#![allow(clippy::missing_safety_doc)]
// `!(x >= 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polya_spectra::cli::spec::SpectrumSpec;
use polya_spectra::constants::{c_d, h1, h2, l_gamma_d, omega_d, threshold_a0, ThresholdRequest};
use polya_spectra::counting::count;
use polya_spectra::polya::{
    polya_exact_constant, verify_dirichlet, verify_exact, verify_neumann, Location,
};
use polya_spectra::riesz::riesz_mean;
use polya_spectra::{BoundaryCondition, DomainMeta, EigenvalueStream, Error};

/// Status codes returned by every fallible call.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Validation = 4,
    Range = 5,
    Precondition = 6,
    Hypothesis = 7,
    Config = 8,
    BcMismatch = 9,
    Mode = 10,
    Case = 11,
    NothingToCheck = 12,
    UndefinedEstimate = 13,
    Overflow = 14,
    Internal = 15,
    Io = 16,
    Json = 17,
    Csv = 18,
    Panic = 19,
}

impl From<&Error> for PsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => Self::Domain,
            Error::Validation(_) => Self::Validation,
            Error::Range(_) => Self::Range,
            Error::Precondition(_) => Self::Precondition,
            Error::Hypothesis(_) => Self::Hypothesis,
            Error::Config(_) => Self::Config,
            Error::BcMismatch(_) => Self::BcMismatch,
            Error::Mode(_) => Self::Mode,
            Error::Case(_) => Self::Case,
            Error::NothingToCheck(_) => Self::NothingToCheck,
            Error::UndefinedEstimate(_) => Self::UndefinedEstimate,
            Error::Overflow(_) => Self::Overflow,
            Error::Internal(_) => Self::Internal,
            Error::Io(_) => Self::Io,
            Error::Json(_) => Self::Json,
            Error::Csv(_) => Self::Csv,
        }
    }
}

/// Opaque spectrum handle.
pub struct PsSpectrum {
    stream: EigenvalueStream,
    meta: DomainMeta,
}

/// Summary of a Polya verification run.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct PsVerifyResult {
    /// Comparisons requested and actually made; fewer when the spectrum is too short.
    pub requested: u64,
    pub checked: u64,
    /// 1 when every checked comparison holds.
    pub holds: i32,
    /// 1 when the comparisons were made in integer arithmetic.
    pub exact: i32,
    /// Smallest relative margin and the index where it occurs.
    pub worst_margin: f64,
    pub worst_index: u64,
    pub failures: u64,
    /// Index of the first failure, 0 if none.
    pub first_failure: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(PsStatus::from(&e), e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    let status = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PsStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            PsStatus::Panic
        }
    };
    status as i32
}

fn null(what: &str) -> Failure {
    Failure(PsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(PsStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a>(p: *const PsSpectrum) -> Result<&'a PsSpectrum, Failure> {
    p.as_ref().ok_or_else(|| null("spectrum handle"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn new_handle(
    spec: *const c_char,
    out: *mut *mut PsSpectrum,
    build: impl FnOnce(&SpectrumSpec) -> polya_spectra::Result<EigenvalueStream>,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = SpectrumSpec::parse(text(spec, "spec")?)?;
    let h = Box::new(PsSpectrum {
        stream: build(&s)?,
        meta: s.meta()?,
    });
    out.write(Box::into_raw(h));
    Ok(())
}

/// Message for the last failure on this thread, or NULL. Valid until the next failing call
/// on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build the spectrum described by the JSON `spec` strictly below `cutoff`.
#[no_mangle]
pub unsafe extern "C" fn ps_spectrum_new(
    spec: *const c_char,
    cutoff: f64,
    out: *mut *mut PsSpectrum,
) -> i32 {
    guard(|| new_handle(spec, out, |s| s.build(cutoff)))
}

/// Build the spectrum described by `spec` holding at least `need` eigenvalues.
#[no_mangle]
pub unsafe extern "C" fn ps_spectrum_with_count(
    spec: *const c_char,
    need: u64,
    out: *mut *mut PsSpectrum,
) -> i32 {
    guard(|| new_handle(spec, out, |s| s.build_with_count(need)))
}

/// Release a handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ps_spectrum_free(spectrum: *mut PsSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of distinct eigenvalues in the handle.
#[no_mangle]
pub unsafe extern "C" fn ps_spectrum_level_count(
    spectrum: *const PsSpectrum,
    out: *mut usize,
) -> i32 {
    guard(|| write(out, handle(spectrum)?.stream.levels().len(), "out"))
}

/// Number of eigenvalues counted with multiplicity.
#[no_mangle]
pub unsafe extern "C" fn ps_spectrum_total(spectrum: *const PsSpectrum, out: *mut u64) -> i32 {
    guard(|| write(out, handle(spectrum)?.stream.total(), "out"))
}

/// The cutoff below which the handle's spectrum is complete.
#[no_mangle]
pub unsafe extern "C" fn ps_spectrum_cutoff(spectrum: *const PsSpectrum, out: *mut f64) -> i32 {
    guard(|| write(out, handle(spectrum)?.stream.cutoff(), "out"))
}

/// Value and multiplicity of the `index`-th distinct eigenvalue.
#[no_mangle]
pub unsafe extern "C" fn ps_spectrum_level(
    spectrum: *const PsSpectrum,
    index: usize,
    value: *mut f64,
    multiplicity: *mut u64,
) -> i32 {
    guard(|| {
        let levels = handle(spectrum)?.stream.levels();
        let l = levels.get(index).ok_or_else(|| {
            Failure(
                PsStatus::Range,
                format!("level {index} out of range (have {})", levels.len()),
            )
        })?;
        if value.is_null() || multiplicity.is_null() {
            return Err(null("out"));
        }
        write(value, l.value, "value")?;
        write(multiplicity, l.multiplicity, "multiplicity")
    })
}

/// Number of eigenvalues strictly below `lambda`.
#[no_mangle]
pub unsafe extern "C" fn ps_count(spectrum: *const PsSpectrum, lambda: f64, out: *mut u64) -> i32 {
    guard(|| write(out, count(&handle(spectrum)?.stream, lambda)?, "out"))
}

/// Riesz mean `sum (lambda - v)_+^gamma`.
#[no_mangle]
pub unsafe extern "C" fn ps_riesz_mean(
    spectrum: *const PsSpectrum,
    gamma: f64,
    lambda: f64,
    out: *mut f64,
) -> i32 {
    guard(|| {
        write(
            out,
            riesz_mean(&handle(spectrum)?.stream, gamma, lambda)?,
            "out",
        )
    })
}

/// Polya's inequality for the first `k_max` eigenvalues: lower bounds for Dirichlet
/// spectra, upper bounds otherwise. With `exact` nonzero the comparison is done in integer
/// arithmetic, which fails with `PS_STATUS_MODE` if the spectrum does not allow it.
#[no_mangle]
pub unsafe extern "C" fn ps_verify_polya(
    spectrum: *const PsSpectrum,
    k_max: u64,
    exact: i32,
    out: *mut PsVerifyResult,
) -> i32 {
    guard(|| {
        let h = handle(spectrum)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = if exact != 0 {
            let k = polya_exact_constant(&h.meta)?;
            verify_exact(&h.stream, h.meta.dimension, h.meta.bc, &k, k_max)?
        } else if h.meta.bc == BoundaryCondition::Dirichlet {
            verify_dirichlet(&h.stream, &h.meta, k_max)?
        } else {
            verify_neumann(&h.stream, &h.meta, k_max)?
        };
        let index = |l: &Location| match l {
            Location::Index(k) => *k,
            Location::Lambda(_) => 0,
        };
        write(
            out,
            PsVerifyResult {
                requested: k_max,
                checked: r.checked,
                holds: r.holds() as i32,
                exact: (r.arithmetic == "exact") as i32,
                worst_margin: r.worst_margin,
                worst_index: r.worst_location.as_ref().map_or(0, index),
                failures: r.failures.len() as u64,
                first_failure: r.failures.first().map_or(0, |f| index(&f.location)),
            },
            "out",
        )
    })
}

/// Weyl constant `C_d`.
#[no_mangle]
pub unsafe extern "C" fn ps_weyl_constant(d: u32, out: *mut f64) -> i32 {
    guard(|| {
        positive_dimension(d)?;
        write(out, c_d(d), "out")
    })
}

/// Volume of the unit ball in `R^d`.
#[no_mangle]
pub unsafe extern "C" fn ps_unit_ball_volume(d: u32, out: *mut f64) -> i32 {
    guard(|| {
        positive_dimension(d)?;
        write(out, omega_d(d), "out")
    })
}

/// Riesz-mean constant `L_{gamma,d}`.
#[no_mangle]
pub unsafe extern "C" fn ps_riesz_constant(gamma: f64, d: u32, out: *mut f64) -> i32 {
    guard(|| {
        positive_dimension(d)?;
        if !(gamma >= 0.0) {
            return Err(Error::Domain(format!("gamma must be >= 0, got {gamma}")).into());
        }
        write(out, l_gamma_d(gamma, d), "out")
    })
}

fn positive_dimension(d: u32) -> Result<(), Failure> {
    if d == 0 {
        Err(Error::Domain("d must be at least 1".into()).into())
    } else {
        Ok(())
    }
}

/// First extremal constant `H1(d)` and the `mu` attaining it, `d >= 3`.
#[no_mangle]
pub unsafe extern "C" fn ps_h1(d: u32, value: *mut f64, argmin_mu: *mut f64) -> i32 {
    guard(|| {
        if value.is_null() || argmin_mu.is_null() {
            return Err(null("out"));
        }
        let h = h1(d)?;
        write(value, h.value, "value")?;
        write(argmin_mu, h.argmin_mu, "argmin_mu")
    })
}

/// Second extremal constant `H2(d)` and the `mu` attaining it, `d >= 3`.
#[no_mangle]
pub unsafe extern "C" fn ps_h2(d: u32, value: *mut f64, argmin_mu: *mut f64) -> i32 {
    guard(|| {
        if value.is_null() || argmin_mu.is_null() {
            return Err(null("out"));
        }
        let h = h2(d)?;
        write(value, h.value, "value")?;
        write(argmin_mu, h.argmin_mu, "argmin_mu")
    })
}

/// Thickness threshold for a JSON request such as
/// `{"case":"dirichlet_thin_d2","volume":100.43,"remainder":50}`.
#[no_mangle]
pub unsafe extern "C" fn ps_threshold(request: *const c_char, out: *mut f64) -> i32 {
    guard(|| {
        let req = ThresholdRequest::from_json(text(request, "request")?)?;
        write(out, threshold_a0(&req)?.value, "out")
    })
}
