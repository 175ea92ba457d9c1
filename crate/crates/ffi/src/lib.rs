//! C ABI over `eqmeasure`.
//!
//! Every function returns an [`EqmStatus`] and writes results through out
//! pointers. Sets and densities are opaque handles created by `*_new` /
//! `*_from_json` and released with the matching `*_free`. On failure the
//! message is available from [`eqm_last_error_message`] on the same thread.
//! Panics never cross the boundary; they surface as `EQM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use eqmeasure::equilibrium::{EquilibriumDensity, Support};
use eqmeasure::factors::{self, Weight};
use eqmeasure::sets::SetDescription;
use eqmeasure::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqmStatus {
    Ok = 0,
    InvalidArgument = 1,
    Domain = 2,
    NumericFailure = 3,
    ResourceLimit = 4,
    NullPointer = 5,
    Utf8 = 6,
    Panic = 7,
}

/// A set description (intervals, arcs, circle, lemniscate or periodic set).
pub struct EqmSet(SetDescription);

/// An equilibrium density bound to its set.
pub struct EqmDensity(EquilibriumDensity);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(EqmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidArgument(_) => EqmStatus::InvalidArgument,
            Error::Domain(_) => EqmStatus::Domain,
            Error::NumericFailure(_) => EqmStatus::NumericFailure,
            Error::ResourceLimit(_) => EqmStatus::ResourceLimit,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EqmStatus::NullPointer, format!("{what} is NULL"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> EqmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            EqmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("panic: {msg}"));
            EqmStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(EqmStatus::Utf8, format!("{what} is not UTF-8: {e}")))
}

fn intervals(set: &EqmSet) -> Result<&eqmeasure::sets::IntervalUnion, Failure> {
    match &set.0 {
        SetDescription::Intervals(s) => Ok(s),
        other => Err(Failure(
            EqmStatus::InvalidArgument,
            format!(
                "this operation needs an interval set, got {}",
                other.kind_name()
            ),
        )),
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn eqm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn eqm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a JSON set description such as
/// `{"type": "intervals", "endpoints": [-1, 1]}`.
///
/// # Safety
/// `json` must be NULL or a NUL-terminated string; `out` must be NULL or
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn eqm_set_from_json(
    json: *const c_char,
    out: *mut *mut EqmSet,
) -> EqmStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let set = SetDescription::from_json(text)?;
        write(out, Box::into_raw(Box::new(EqmSet(set))))
    })
}

/// # Safety
/// `set` must be NULL or a handle from [`eqm_set_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eqm_set_free(set: *mut EqmSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Builds the equilibrium density of `set`.
///
/// # Safety
/// `set` must be a live handle or NULL; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn eqm_density_new(
    set: *const EqmSet,
    out: *mut *mut EqmDensity,
) -> EqmStatus {
    guard(|| {
        let set = borrow(set, "set")?;
        let density = EquilibriumDensity::from_description(&set.0)?;
        write(out, Box::into_raw(Box::new(EqmDensity(density))))
    })
}

/// # Safety
/// `density` must be NULL or a handle from [`eqm_density_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eqm_density_free(density: *mut EqmDensity) {
    if !density.is_null() {
        drop(Box::from_raw(density));
    }
}

/// Density at a real point (intervals) or angle (arcs, circles).
///
/// # Safety
/// Pointers must be live handles / writable, or NULL.
#[no_mangle]
pub unsafe extern "C" fn eqm_density_eval(
    density: *const EqmDensity,
    t: f64,
    out: *mut f64,
) -> EqmStatus {
    guard(|| {
        let d = borrow(density, "density")?;
        write(out, d.0.evaluate(t)?)
    })
}

/// # Safety
/// Pointers must be live handles / writable, or NULL.
#[no_mangle]
pub unsafe extern "C" fn eqm_density_mass(density: *const EqmDensity, out: *mut f64) -> EqmStatus {
    guard(|| write(out, borrow(density, "density")?.0.mass()))
}

/// # Safety
/// Pointers must be live handles / writable, or NULL.
#[no_mangle]
pub unsafe extern "C" fn eqm_density_frostman_spread(
    density: *const EqmDensity,
    out: *mut f64,
) -> EqmStatus {
    guard(|| write(out, borrow(density, "density")?.0.frostman_spread()))
}

/// Number of gap zeros ξ (one per gap of an interval set, else zero).
///
/// # Safety
/// Pointers must be live handles / writable, or NULL.
#[no_mangle]
pub unsafe extern "C" fn eqm_density_xi_count(
    density: *const EqmDensity,
    out: *mut usize,
) -> EqmStatus {
    guard(|| write(out, borrow(density, "density")?.0.xi().len()))
}

/// Copies the gap zeros into `buf`, which must hold at least
/// [`eqm_density_xi_count`] values.
///
/// # Safety
/// `buf` must be NULL or valid for `len` writes of `double`.
#[no_mangle]
pub unsafe extern "C" fn eqm_density_xi(
    density: *const EqmDensity,
    buf: *mut f64,
    len: usize,
) -> EqmStatus {
    guard(|| {
        let xi = borrow(density, "density")?.0.xi();
        if xi.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < xi.len() {
            return Err(Failure(
                EqmStatus::InvalidArgument,
                format!("buffer holds {len} values, {} needed", xi.len()),
            ));
        }
        ptr::copy_nonoverlapping(xi.as_ptr(), buf, xi.len());
        Ok(())
    })
}

/// Ω at endpoint `j` (0-based, increasing order).
///
/// # Safety
/// Pointers must be live handles / writable, or NULL.
#[no_mangle]
pub unsafe extern "C" fn eqm_omega_limit(
    density: *const EqmDensity,
    j: usize,
    out: *mut f64,
) -> EqmStatus {
    guard(|| {
        let d = borrow(density, "density")?;
        write(out, d.0.omega_limit(j)?.omega)
    })
}

/// Local Markov factor at endpoint `j` of an interval, arc or periodic set.
///
/// # Safety
/// Pointers must be live handles / writable, or NULL.
#[no_mangle]
pub unsafe extern "C" fn eqm_markov_local(
    set: *const EqmSet,
    j: usize,
    out: *mut f64,
) -> EqmStatus {
    guard(|| {
        let report = match &borrow(set, "set")?.0 {
            SetDescription::Intervals(s) => factors::markov_local(s, j)?,
            SetDescription::Arcs(a) => factors::markov_local_arc(a, j)?,
            SetDescription::Periodic(p) => factors::markov_trig(p, j)?,
            other => {
                return Err(Failure(
                    EqmStatus::InvalidArgument,
                    format!("a {} has no endpoints", other.kind_name()),
                ))
            }
        };
        write(out, report.value)
    })
}

/// Largest local Markov factor of an interval set.
///
/// # Safety
/// Pointers must be live handles / writable, or NULL.
#[no_mangle]
pub unsafe extern "C" fn eqm_markov_global(set: *const EqmSet, out: *mut f64) -> EqmStatus {
    guard(|| {
        let s = intervals(borrow(set, "set")?)?;
        write(out, factors::markov_global(s)?.value)
    })
}

/// Pointwise Bernstein factor: `πω(x)` on interval sets, `2πω_Γ(e^{ix})` on
/// periodic sets, `(1 + 2πω(e^{ix}))/2` on arcs and `2πω` on circles.
///
/// # Safety
/// Pointers must be live handles / writable, or NULL.
#[no_mangle]
pub unsafe extern "C" fn eqm_bernstein_factor(
    set: *const EqmSet,
    x: f64,
    out: *mut f64,
) -> EqmStatus {
    guard(|| {
        let report = match &borrow(set, "set")?.0 {
            SetDescription::Intervals(s) => factors::bernstein_factor(s, x)?,
            SetDescription::Periodic(p) => factors::bernstein_factor_trig(p, x)?,
            SetDescription::Arcs(a) => factors::bernstein_factor_circle_subset(a, x)?,
            SetDescription::Circle(c) => {
                factors::riesz_factor(&Support::Circle(*c), c.point_at(x))?
            }
            SetDescription::Lemniscate(_) => {
                return Err(Failure(
                    EqmStatus::InvalidArgument,
                    "lemniscate points are complex; use the Rust API".to_string(),
                ))
            }
        };
        write(out, report.value)
    })
}

/// L² Markov constant of an interval set under a weight given as JSON
/// (`{"exponents": [...], "h": [...]}`); NULL means the unit weight.
///
/// # Safety
/// `weight_json` must be NULL or NUL-terminated; other pointers as above.
#[no_mangle]
pub unsafe extern "C" fn eqm_l2_markov_constant(
    set: *const EqmSet,
    weight_json: *const c_char,
    out: *mut f64,
) -> EqmStatus {
    guard(|| {
        let s = intervals(borrow(set, "set")?)?;
        let weight = if weight_json.is_null() {
            Weight::unweighted(s)
        } else {
            Weight::from_json(read_str(weight_json, "weight_json")?)?
        };
        write(out, factors::l2_markov_constant(s, &weight)?.value)
    })
}

/// `max |P^{(k)}|` over `‖P‖ ≤ 1` on [-1, 1] for degree `n`:
/// `∏_{i<k} (n² - i²) / (2k-1)!!`.
///
/// # Safety
/// `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn eqm_va_markov_exact(n: u32, k: u32, out: *mut f64) -> EqmStatus {
    guard(|| write(out, factors::va_markov_exact(n, k)?))
}
