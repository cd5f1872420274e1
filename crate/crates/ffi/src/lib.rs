//! C interface to the `mittag-leffler` crate.
//!
//! An [`MlfEvaluator`] owns the parameters `(rho, mu)` and the evaluation
//! options. Every function returns an [`MlfStatus`]; on failure the message
//! is kept per thread and can be read with [`mlf_last_error`]. Panics are
//! caught at the boundary and reported as [`MlfStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mittag_leffler::params::{route, ContourConfig, ContourMode, MLParameters, ParamError, PolarComplex, Representation};
use mittag_leffler::quadrature::Tolerances;
use mittag_leffler::reference::{recip_gamma, series_eval, ReferenceError, SeriesSettings};
use mittag_leffler::representations::{evaluate, EvalError, EvalOptions, EvalReport, Method, Strategy};
use num_complex::Complex64;

/// Result code of every `mlf_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParam = 2,
    Inadmissible = 3,
    Quadrature = 4,
    Series = 5,
    Panic = 6,
}

/// How a value was obtained.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlfMethod {
    RepA1 = 1,
    RepA2 = 2,
    RepA3 = 3,
    RepBCase1 = 11,
    RepBCase2 = 12,
    RepBCase3 = 13,
    RepBCase4 = 14,
    RepBCase5 = 15,
    RepBCase6 = 16,
    Series = 20,
    ClosedForm = 21,
}

/// Selects the representation in [`mlf_evaluator_set_contour`].
pub const MLF_REP_A: i32 = 0;
pub const MLF_REP_B: i32 = 1;

/// Selects the contour shape in [`mlf_evaluator_set_contour`].
pub const MLF_CONTOUR_P1: i32 = 1;
pub const MLF_CONTOUR_P2: i32 = 2;
pub const MLF_CONTOUR_P3: i32 = 3;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlfResult {
    pub re: f64,
    pub im: f64,
    /// Absolute error estimate.
    pub abs_err: f64,
    pub method: MlfMethod,
    /// Number of warnings; the text is available from [`mlf_last_warnings`].
    pub warning_count: u32,
}

/// Opaque evaluator handle.
pub struct MlfEvaluator {
    params: MLParameters,
    options: EvalOptions,
    /// `None` picks the ray offset per point for representation A.
    eps: Option<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
    static LAST_WARNINGS: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(MlfStatus, String);

impl From<ParamError> for Failure {
    fn from(e: ParamError) -> Self {
        Failure(MlfStatus::InvalidParam, e.to_string())
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        let status = match &e {
            EvalError::Param(_) => MlfStatus::InvalidParam,
            EvalError::InadmissibleTheta { .. } | EvalError::ZeroModulus => MlfStatus::Inadmissible,
            EvalError::Kernel(_) | EvalError::Quadrature(_) | EvalError::QuadratureFailure { .. } => MlfStatus::Quadrature,
            EvalError::Series(_) => MlfStatus::Series,
        };
        Failure(status, e.to_string())
    }
}

impl From<ReferenceError> for Failure {
    fn from(e: ReferenceError) -> Self {
        Failure(MlfStatus::Series, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MlfStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body` behind the panic guard and records its error message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MlfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MlfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            MlfStatus::Panic
        }
    }
}

fn method_code(m: Method) -> MlfMethod {
    use mittag_leffler::params::RepBCase::*;
    match m {
        Method::RepAP1 => MlfMethod::RepA1,
        Method::RepAP2 => MlfMethod::RepA2,
        Method::RepAP3 => MlfMethod::RepA3,
        Method::RepB(Case1) => MlfMethod::RepBCase1,
        Method::RepB(Case2) => MlfMethod::RepBCase2,
        Method::RepB(Case3) => MlfMethod::RepBCase3,
        Method::RepB(Case4) => MlfMethod::RepBCase4,
        Method::RepB(Case5) => MlfMethod::RepBCase5,
        Method::RepB(Case6) => MlfMethod::RepBCase6,
        Method::Series => MlfMethod::Series,
        Method::ClosedForm => MlfMethod::ClosedForm,
    }
}

fn write_result(out: *mut MlfResult, r: &EvalReport) {
    LAST_WARNINGS.with(|w| *w.borrow_mut() = r.warnings.join("\n"));
    let result = MlfResult {
        re: r.value.re,
        im: r.value.im,
        abs_err: r.abs_err,
        method: method_code(r.method),
        warning_count: r.warnings.len() as u32,
    };
    // SAFETY: callers check `out` for null first; the C side owns the storage.
    unsafe { out.write(result) };
}

/// Copies `text` into `buf` as a NUL-terminated string, truncating to fit.
/// Returns the length needed including the terminator.
fn copy_out(text: &str, buf: *mut c_char, len: usize) -> usize {
    let bytes = text.as_bytes();
    if !buf.is_null() && len > 0 {
        let n = bytes.len().min(len - 1);
        // SAFETY: `buf` holds at least `len` bytes by contract.
        unsafe {
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
    }
    bytes.len() + 1
}

/// Creates an evaluator for `E_{rho,mu}` with `mu = mu_re + i mu_im` and the
/// automatic strategy. The handle must be released with [`mlf_evaluator_free`].
///
/// # Safety
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn mlf_evaluator_new(rho: f64, mu_re: f64, mu_im: f64, out: *mut *mut MlfEvaluator) -> MlfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = MLParameters::new(rho, mu_re, mu_im)?;
        let ev = Box::new(MlfEvaluator { params, options: EvalOptions::default(), eps: None });
        out.write(Box::into_raw(ev));
        Ok(())
    })
}

/// Releases an evaluator. Null is ignored.
///
/// # Safety
/// `ev` must be null or a handle from [`mlf_evaluator_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mlf_evaluator_free(ev: *mut MlfEvaluator) {
    if !ev.is_null() {
        drop(Box::from_raw(ev));
    }
}

/// Sets the relative and absolute quadrature tolerances.
///
/// # Safety
/// `ev` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlf_evaluator_set_tolerances(ev: *mut MlfEvaluator, rtol: f64, atol: f64) -> MlfStatus {
    guard(|| {
        let ev = ev.as_mut().ok_or_else(|| null("evaluator"))?;
        let tol = Tolerances { rtol, atol, ..ev.options.tol };
        tol.validate().map_err(|e| Failure(MlfStatus::InvalidParam, e.to_string()))?;
        ev.options.tol = tol;
        Ok(())
    })
}

/// Pins the representation (`MLF_REP_A` or `MLF_REP_B`) and contour shape
/// (`MLF_CONTOUR_P1/P2/P3`). `delta1` and `delta2` are used by P1, `delta1`
/// alone by P2. A NaN `eps` picks the ray offset per point; a NaN `eps1`
/// keeps the default detour radius.
///
/// # Safety
/// `ev` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlf_evaluator_set_contour(
    ev: *mut MlfEvaluator,
    rep: i32,
    mode: i32,
    delta1: f64,
    delta2: f64,
    eps: f64,
    eps1: f64,
) -> MlfStatus {
    guard(|| {
        let ev = ev.as_mut().ok_or_else(|| null("evaluator"))?;
        let rep = match rep {
            MLF_REP_A => Representation::A,
            MLF_REP_B => Representation::B,
            other => return Err(Failure(MlfStatus::InvalidParam, format!("unknown representation {other}"))),
        };
        let mode = match mode {
            MLF_CONTOUR_P1 => ContourMode::Param1 { delta1, delta2 },
            MLF_CONTOUR_P2 => ContourMode::Param2 { delta: delta1 },
            MLF_CONTOUR_P3 => ContourMode::Param3,
            other => return Err(Failure(MlfStatus::InvalidParam, format!("unknown contour mode {other}"))),
        };
        let mut config = ContourConfig::new(mode);
        if !eps1.is_nan() {
            config = config.with_eps1(eps1);
        }
        let probe = if eps.is_nan() { config } else { config.with_eps(eps) };
        route(&ev.params, probe, rep)?;
        ev.options.strategy = Strategy::Fixed { rep, config };
        ev.eps = (!eps.is_nan()).then_some(eps);
        Ok(())
    })
}

/// Returns to the automatic strategy.
///
/// # Safety
/// `ev` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlf_evaluator_set_auto(ev: *mut MlfEvaluator) -> MlfStatus {
    guard(|| {
        let ev = ev.as_mut().ok_or_else(|| null("evaluator"))?;
        ev.options.strategy = Strategy::Auto;
        ev.eps = None;
        Ok(())
    })
}

/// Enables (nonzero) or disables (zero) replacing a failed pinned integral
/// by the series. The automatic strategy always falls back.
///
/// # Safety
/// `ev` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mlf_evaluator_set_fallback(ev: *mut MlfEvaluator, enabled: i32) -> MlfStatus {
    guard(|| {
        let ev = ev.as_mut().ok_or_else(|| null("evaluator"))?;
        ev.options.fallback = enabled != 0;
        Ok(())
    })
}

/// Evaluates `E_{rho,mu}(t e^{i theta})`.
///
/// # Safety
/// `ev` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mlf_evaluate(ev: *const MlfEvaluator, t: f64, theta: f64, out: *mut MlfResult) -> MlfStatus {
    guard(|| {
        let ev = ev.as_ref().ok_or_else(|| null("evaluator"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let z = PolarComplex::new(t, theta)?;
        let mut options = ev.options;
        if let Strategy::Fixed { rep: Representation::A, config } = options.strategy {
            let eps = ev.eps.unwrap_or_else(|| mittag_leffler::representations::suggested_eps(&ev.params, t));
            options.strategy = Strategy::Fixed { rep: Representation::A, config: config.with_eps(eps) };
        }
        let report = evaluate(&ev.params, z, &options)?;
        write_result(out, &report);
        Ok(())
    })
}

/// Sums the power series at `z = re + i im` without an evaluator.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mlf_series(rho: f64, mu_re: f64, mu_im: f64, re: f64, im: f64, out: *mut MlfResult) -> MlfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = MLParameters::new(rho, mu_re, mu_im)?;
        let s = series_eval(&params, Complex64::new(re, im), &SeriesSettings::default())?;
        let report = EvalReport { value: s.value, abs_err: s.abs_err, method: Method::Series, warnings: Vec::new() };
        write_result(out, &report);
        Ok(())
    })
}

/// `1 / Gamma(re + i im)`, exactly zero at the poles of Gamma.
///
/// # Safety
/// `out_re` and `out_im` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mlf_recip_gamma(re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> MlfStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return Err(null("output"));
        }
        let v = recip_gamma(Complex64::new(re, im));
        out_re.write(v.re);
        out_im.write(v.im);
        Ok(())
    })
}

/// Copies the last error message of this thread into `buf` (`len` bytes,
/// NUL-terminated, truncated if short). Returns the size needed including
/// the terminator, so a null `buf` queries the length.
///
/// # Safety
/// `buf` must be null or hold at least `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn mlf_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| copy_out(&e.borrow(), buf, len))
}

/// Like [`mlf_last_error`] for the warnings of the last successful
/// evaluation on this thread, one per line.
///
/// # Safety
/// `buf` must be null or hold at least `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn mlf_last_warnings(buf: *mut c_char, len: usize) -> usize {
    LAST_WARNINGS.with(|w| copy_out(&w.borrow(), buf, len))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mlf_version() -> *const c_char {
    const VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a NUL byte"),
    };
    VERSION.as_ptr()
}
