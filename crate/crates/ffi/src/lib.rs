//! C interface to `hamjac`.
//!
//! Every entry point returns an [`HjcStatus`]; on failure a description is
//! available from [`hjc_last_error`] on the same thread. Analyses are opaque
//! handles released with [`hjc_analysis_free`]; strings returned through
//! `char **` out-parameters are owned by the caller and released with
//! [`hjc_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hamjac::error::Error;
use hamjac::numerics::{integrate, Curve, IntegrateConfig};
use hamjac::quantize::{build_representation, physical_states};
use hamjac::report::{emit, Format};
use hamjac::symmetry::{is_total_derivative, parse_transformation, vary_lagrangian};
use hamjac::Analysis;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HjcStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The model or transformation text failed to parse.
    Parse = 3,
    /// The analysis rejected the model (unsupported, inconsistent, ...).
    Analysis = 4,
    /// A numeric argument was out of range.
    Domain = 5,
    /// An internal error; the library state is unaffected.
    Internal = 6,
}

/// Report formats for [`hjc_analysis_report`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HjcFormat {
    Json = 0,
    Text = 1,
}

/// Options for [`hjc_integrate_csv`]. Curves are given as
/// `(start, slope)` pairs, i.e. `value(τ) = start + slope·τ`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HjcIntegrateOptions {
    pub tau_max: f64,
    pub steps: usize,
    pub e_start: f64,
    pub e_slope: f64,
    pub chi_start: f64,
    pub chi_slope: f64,
    pub odd_units: usize,
    pub seed: u64,
    pub mass: f64,
    /// Initial lower-index momentum.
    pub momentum: [f64; 4],
}

/// Opaque result of the symbolic pipeline.
pub struct HjcAnalysis {
    inner: Analysis,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(HjcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Frontend(_) => HjcStatus::Parse,
            Error::Domain(_) | Error::Dimension(_) => HjcStatus::Domain,
            Error::Internal(_) => HjcStatus::Internal,
            _ => HjcStatus::Analysis,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HjcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HjcStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal error (panic)");
            HjcStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(HjcStatus::NullArgument, format!("`{what}` is null"))
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(HjcStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c =
        CString::new(s).map_err(|_| Failure(HjcStatus::Internal, "output contains NUL".into()))?;
    // SAFETY: callers check `out` for null before producing output.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the most recent failure on this thread (empty after a
/// success). The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hjc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hjc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse and analyze a model. On success `*out` receives a new handle.
///
/// # Safety
/// `model_text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hjc_analyze(
    model_text: *const c_char,
    out: *mut *mut HjcAnalysis,
) -> HjcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inner = hamjac::analyze_text(text(model_text, "model_text")?)?;
        *out = Box::into_raw(Box::new(HjcAnalysis { inner }));
        Ok(())
    })
}

/// Release a handle from [`hjc_analyze`]; null is ignored.
///
/// # Safety
/// `analysis` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hjc_analysis_free(analysis: *mut HjcAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

/// Render the analysis report.
///
/// # Safety
/// `analysis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hjc_analysis_report(
    analysis: *const HjcAnalysis,
    format: HjcFormat,
    out: *mut *mut c_char,
) -> HjcStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| null("analysis"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let format = match format {
            HjcFormat::Json => Format::Json,
            HjcFormat::Text => Format::Text,
        };
        give_string(emit(&a.inner, &[], format), out)
    })
}

/// Number of primary and secondary constraints.
///
/// # Safety
/// `analysis` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hjc_analysis_constraint_counts(
    analysis: *const HjcAnalysis,
    primary: *mut usize,
    secondary: *mut usize,
) -> HjcStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| null("analysis"))?;
        if primary.is_null() || secondary.is_null() {
            return Err(null("primary/secondary"));
        }
        *primary = a.inner.ledger.primaries().count();
        *secondary = a.inner.ledger.secondaries().count();
        Ok(())
    })
}

/// Default options: τ ∈ [0, 1], 1000 steps, e = 1, χ amplitude 0.3, six odd
/// units, seed 0, m = 1, rest-frame momentum.
#[no_mangle]
pub extern "C" fn hjc_integrate_options_default() -> HjcIntegrateOptions {
    HjcIntegrateOptions {
        tau_max: 1.0,
        steps: 1000,
        e_start: 1.0,
        e_slope: 0.0,
        chi_start: 0.3,
        chi_slope: 0.0,
        odd_units: 6,
        seed: 0,
        mass: 1.0,
        momentum: [1.0, 0.0, 0.0, 0.0],
    }
}

fn curve(start: f64, slope: f64) -> Curve {
    if slope == 0.0 {
        if start == 0.0 {
            Curve::Zero
        } else {
            Curve::Const(start)
        }
    } else {
        Curve::Linear { start, slope }
    }
}

/// Integrate the equations of motion and return the trajectory as CSV.
///
/// # Safety
/// `analysis` must be a live handle, `options` readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hjc_integrate_csv(
    analysis: *const HjcAnalysis,
    options: *const HjcIntegrateOptions,
    out: *mut *mut c_char,
) -> HjcStatus {
    guard(|| {
        let a = analysis.as_ref().ok_or_else(|| null("analysis"))?;
        let o = options.as_ref().ok_or_else(|| null("options"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let finite = [o.e_start, o.e_slope, o.chi_start, o.chi_slope, o.mass]
            .iter()
            .chain(&o.momentum)
            .all(|x| x.is_finite());
        if !finite {
            return Err(Failure(HjcStatus::Domain, "non-finite option".into()));
        }
        let cfg = IntegrateConfig {
            tau_max: o.tau_max,
            steps: o.steps,
            e_curve: curve(o.e_start, o.e_slope),
            chi_curve: curve(o.chi_start, o.chi_slope),
            odd_units: o.odd_units,
            seed: o.seed,
            constants: [("m".to_string(), o.mass)].into_iter().collect(),
            momentum: Some(o.momentum),
        };
        cfg.validate()?;
        let t = integrate(&a.inner, &cfg)?;
        give_string(t.to_csv(), out)
    })
}

/// Dimension of the physical-state space `ker γ₅(p·γ − m)`.
///
/// # Safety
/// `momentum` must point to four readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hjc_physical_state_dimension(
    momentum: *const f64,
    mass: f64,
    out: *mut usize,
) -> HjcStatus {
    guard(|| {
        if momentum.is_null() {
            return Err(null("momentum"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let p: [f64; 4] = std::slice::from_raw_parts(momentum, 4)
            .try_into()
            .expect("four components");
        if mass.is_nan() || mass <= 0.0 || !p.iter().all(|x| x.is_finite()) {
            return Err(Failure(
                HjcStatus::Domain,
                "mass must be positive and p finite".into(),
            ));
        }
        *out = physical_states(&build_representation(), p, mass)?.dimension();
        Ok(())
    })
}

/// Vary the model's Lagrangian by a transformation; `*is_total` is set to 1
/// if the variation is a total τ-derivative and 0 otherwise.
///
/// # Safety
/// Both texts must be NUL-terminated strings; `is_total` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hjc_vary(
    model_text: *const c_char,
    transformation_text: *const c_char,
    is_total: *mut c_int,
) -> HjcStatus {
    guard(|| {
        if is_total.is_null() {
            return Err(null("is_total"));
        }
        let mut model =
            hamjac::frontend::parse_model(text(model_text, "model_text")?).map_err(Error::from)?;
        let t = parse_transformation(
            &mut model,
            text(transformation_text, "transformation_text")?,
        )?;
        let dl = vary_lagrangian(&model, &t)?;
        *is_total = c_int::from(is_total_derivative(&model, &dl)?.is_total_derivative);
        Ok(())
    })
}

/// Release a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hjc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
