//! C ABI over the thermalops library.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` or by
//! an operation, and released with the matching `*_free`. Every fallible call
//! returns a `ThoStatus`; on failure `tho_last_error()` describes the cause on
//! the calling thread. Strings returned to the caller are released with
//! `tho_string_free`. Panics are caught and reported as `THO_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use thermalops::channel::{choi_distance, compose, QuantumChannel};
use thermalops::experiments;
use thermalops::qubit::{self, Membership, QubitParams};
use thermalops::thermal::{realize, ThermalOpSpec};
use thermalops::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    NotSquare = 5,
    NonFinite = 6,
    NotHermitian = 7,
    NotUnitary = 8,
    EnergyConservation = 9,
    Infeasible = 10,
    InvalidArgument = 11,
    DimensionCap = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThoMembership {
    Interior = 0,
    Dephasing = 1,
    BoundaryNotReachable = 2,
    Outside = 3,
}

/// A CPTP map given by its Choi matrix.
pub struct ThoChannel(QuantumChannel);

/// A thermal operation: system and bath Hamiltonians, temperature and unitary.
pub struct ThoSpec(ThermalOpSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ThoStatus {
    match e {
        Error::DimensionMismatch(_) => ThoStatus::DimensionMismatch,
        Error::NotSquare { .. } => ThoStatus::NotSquare,
        Error::NonFinite(_) => ThoStatus::NonFinite,
        Error::NotHermitian { .. } => ThoStatus::NotHermitian,
        Error::NotUnitary { .. } => ThoStatus::NotUnitary,
        Error::EnergyConservation { .. } => ThoStatus::EnergyConservation,
        Error::Infeasible(_) => ThoStatus::Infeasible,
        Error::InvalidArgument(_) => ThoStatus::InvalidArgument,
        Error::DimensionCap { .. } => ThoStatus::DimensionCap,
        Error::Parse(_) => ThoStatus::Parse,
    }
}

struct Failure(ThoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ThoStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic for `tho_last_error`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ThoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ThoStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            ThoStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(ThoStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| {
        // Data errors come from validation inside the typed constructors.
        if e.is_data() {
            Failure(ThoStatus::InvalidArgument, e.to_string())
        } else {
            Failure(ThoStatus::Parse, e.to_string())
        }
    })
}

fn to_c_string(v: &impl serde::Serialize) -> *mut c_char {
    let text = serde_json::to_string(v).expect("serializable value");
    CString::new(text).expect("JSON has no nul bytes").into_raw()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn tho_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tho_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tho_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"dim": n, "choi": {"rows", "cols", "data": [[re, im], ...]}}`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_channel_from_json(json: *const c_char, out: *mut *mut ThoChannel) -> ThoStatus {
    guard(|| {
        let ch: QuantumChannel = parse_json(read_str(json, "json")?)?;
        store(out, Box::into_raw(Box::new(ThoChannel(ch))), "out")
    })
}

/// # Safety
/// `ch` must be a live handle; `out` must be writable. Free the result with `tho_string_free`.
#[no_mangle]
pub unsafe extern "C" fn tho_channel_to_json(ch: *const ThoChannel, out: *mut *mut c_char) -> ThoStatus {
    guard(|| {
        let ch = handle(ch, "channel")?;
        store(out, to_c_string(&ch.0), "out")
    })
}

/// # Safety
/// `ch` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tho_channel_free(ch: *mut ThoChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Dimension of the channel's input space, or 0 for a null handle.
///
/// # Safety
/// `ch` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tho_channel_dim(ch: *const ThoChannel) -> usize {
    ch.as_ref().map_or(0, |c| c.0.dim())
}

/// Sets `*pass` to 1 when the Choi matrix is PSD and trace preserving within `tol`.
///
/// # Safety
/// `ch` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_channel_validate(
    ch: *const ThoChannel,
    tol: f64,
    pass: *mut c_int,
    min_eigenvalue: *mut f64,
) -> ThoStatus {
    guard(|| {
        let report = handle(ch, "channel")?.0.validate(tol);
        store(pass, report.pass() as c_int, "pass")?;
        store(min_eigenvalue, report.min_eigenvalue, "min_eigenvalue")
    })
}

/// The channel `first ∘ second`.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_channel_compose(
    first: *const ThoChannel,
    second: *const ThoChannel,
    out: *mut *mut ThoChannel,
) -> ThoStatus {
    guard(|| {
        let c = compose(&handle(first, "first")?.0, &handle(second, "second")?.0)?;
        store(out, Box::into_raw(Box::new(ThoChannel(c))), "out")
    })
}

/// Trace norm of the Choi difference divided by the dimension.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_channel_distance(a: *const ThoChannel, b: *const ThoChannel, out: *mut f64) -> ThoStatus {
    guard(|| {
        let d = choi_distance(&handle(a, "a")?.0, &handle(b, "b")?.0)?;
        store(out, d, "out")
    })
}

/// Parses `{"H_S": ..., "H_B": ..., "beta": x, "U": <matrix>}` and checks
/// unitarity and energy conservation.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_spec_from_json(json: *const c_char, out: *mut *mut ThoSpec) -> ThoStatus {
    guard(|| {
        let spec: ThermalOpSpec = parse_json(read_str(json, "json")?)?;
        store(out, Box::into_raw(Box::new(ThoSpec(spec))), "out")
    })
}

/// # Safety
/// `spec` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tho_spec_free(spec: *mut ThoSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// The channel obtained by coupling to the Gibbs bath and tracing it out.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_spec_realize(spec: *const ThoSpec, out: *mut *mut ThoChannel) -> ThoStatus {
    guard(|| {
        let ch = realize(&handle(spec, "spec")?.0);
        store(out, Box::into_raw(Box::new(ThoChannel(ch))), "out")
    })
}

/// Qubit coordinates: λ and the coherence factor c.
///
/// # Safety
/// `ch` must be a live qubit handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_qubit_psi(
    ch: *const ThoChannel,
    lambda: *mut f64,
    c_re: *mut f64,
    c_im: *mut f64,
) -> ThoStatus {
    guard(|| {
        let e = qubit::psi(&handle(ch, "channel")?.0)?;
        store(lambda, e.lambda, "lambda")?;
        store(c_re, e.c.re, "c_re")?;
        store(c_im, e.c.im, "c_im")
    })
}

/// The qubit channel with coordinates (λ, r·e^{iφ}) at Boltzmann ratio q.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_qubit_psi_inv(
    lambda: f64,
    r: f64,
    phi: f64,
    q: f64,
    tol: f64,
    out: *mut *mut ThoChannel,
) -> ThoStatus {
    guard(|| {
        let ch = qubit::psi_inv(&QubitParams::new(lambda, r, phi, q)?, tol)?;
        store(out, Box::into_raw(Box::new(ThoChannel(ch))), "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_qubit_membership(
    lambda: f64,
    r: f64,
    phi: f64,
    q: f64,
    tol: f64,
    out: *mut ThoMembership,
) -> ThoStatus {
    guard(|| {
        let m = match qubit::membership(&QubitParams::new(lambda, r, phi, q)?, tol) {
            Membership::InteriorTO => ThoMembership::Interior,
            Membership::DephasingTO => ThoMembership::Dephasing,
            Membership::EnTOBoundaryNotTO => ThoMembership::BoundaryNotReachable,
            Membership::OutsideEnTO => ThoMembership::Outside,
        };
        store(out, m, "out")
    })
}

/// Full experiment report as JSON for `name` in {"discontinuity-qubit",
/// "discontinuity-qutrit"} at Boltzmann ratio q.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tho_experiment_json(name: *const c_char, q: f64, out: *mut *mut c_char) -> ThoStatus {
    guard(|| {
        let report = match read_str(name, "name")? {
            "discontinuity-qubit" => experiments::discontinuity_qubit(q)?,
            "discontinuity-qutrit" => experiments::discontinuity_qutrit(q)?,
            other => return Err(Failure(ThoStatus::InvalidArgument, format!("unknown experiment `{other}`"))),
        };
        store(out, to_c_string(&report), "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn panic_is_caught() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, ThoStatus::Panic);
        let msg = unsafe { CStr::from_ptr(tho_last_error()) }.to_str().unwrap().to_owned();
        assert_eq!(msg, "panic: boom");
    }

    #[test]
    fn null_out_pointer() {
        let status = unsafe { tho_qubit_psi_inv(0.5, 0.1, 0.0, 0.2, 1e-9, ptr::null_mut()) };
        assert_eq!(status, ThoStatus::NullPointer);
    }
}
