//! C interface to the `entangle` library.
//!
//! Every fallible function returns an [`EntStatus`] and writes results through
//! out-pointers. After a non-OK status, [`ent_last_error`] describes the
//! failure on the calling thread. Cut labels are 1-based, as in the Rust API.
//! Amplitudes are row-major with subsystem 1 slowest.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entangle::bipartite::{concurrence, entanglement_entropy, schmidt_decompose};
use entangle::io::{parse_state, state_to_json, StateInput};
use entangle::linalg::c;
use entangle::measures::{geometric_measure, OptimizerConfig};
use entangle::threequbit::{slocc_classify, three_tangle, SloccClass};
use entangle::{Error, StateVector, SubsystemSet};

/// Largest party count accepted by the GHZ and W constructors.
pub const ENT_MAX_QUBITS: usize = 12;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    UnsupportedDims = 4,
    Parse = 5,
    Numerical = 6,
    /// The caller's buffer is too short; the required length was written.
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntSloccClass {
    Product = 0,
    Biseparable1_23 = 1,
    Biseparable2_13 = 2,
    Biseparable3_12 = 3,
    W = 4,
    Ghz = 5,
}

impl From<SloccClass> for EntSloccClass {
    fn from(c: SloccClass) -> Self {
        match c {
            SloccClass::Product => EntSloccClass::Product,
            SloccClass::Biseparable1_23 => EntSloccClass::Biseparable1_23,
            SloccClass::Biseparable2_13 => EntSloccClass::Biseparable2_13,
            SloccClass::Biseparable3_12 => EntSloccClass::Biseparable3_12,
            SloccClass::W => EntSloccClass::W,
            SloccClass::Ghz => EntSloccClass::Ghz,
        }
    }
}

/// Opaque pure-state handle. Release with [`ent_state_free`].
pub struct EntState {
    psi: StateVector,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(EntStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(EntStatus::NullPointer, format!("{what} is null"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::NotNormalized { .. }
            | Error::InvalidState(_)
            | Error::InvalidDensity(_)
            | Error::DimensionMismatch(_) => EntStatus::InvalidState,
            Error::UnsupportedDims { .. } | Error::SizeLimit { .. } => EntStatus::UnsupportedDims,
            Error::Parse(_) | Error::Json(_) | Error::Io(_) => EntStatus::Parse,
            Error::NumericalDegeneracy(_) => EntStatus::Numerical,
            _ => EntStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EntStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EntStatus::Ok,
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
            EntStatus::Panic
        }
    }
}

unsafe fn handle<'a>(p: *const EntState) -> Result<&'a StateVector, Failure> {
    p.as_ref().map(|s| &s.psi).ok_or_else(|| Failure::null("state"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(Failure::null(what))
    } else {
        Ok(std::slice::from_raw_parts(p, len))
    }
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_state(out: *mut *mut EntState, psi: StateVector) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(EntState { psi })))
}

unsafe fn cut_set(cut: *const usize, n_cut: usize) -> Result<SubsystemSet, Failure> {
    Ok(SubsystemSet::new(slice(cut, n_cut, "cut")?.iter().copied()))
}

unsafe fn fill(values: &[f64], buf: *mut f64, cap: usize, out_len: *mut usize) -> Result<(), Failure> {
    put(out_len, values.len())?;
    if cap < values.len() {
        return Err(Failure(EntStatus::BufferTooSmall, format!("buffer holds {cap}, need {}", values.len())));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(Failure::null("buffer"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ent_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or NULL.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ent_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Build a state from local dimensions and amplitudes.
///
/// `im` may be NULL for real amplitudes. The state must already be normalized.
///
/// # Safety
/// `dims` must point to `n_parties` values; `re` (and `im` if non-NULL) to `len`.
#[no_mangle]
pub unsafe extern "C" fn ent_state_new(
    dims: *const usize,
    n_parties: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut EntState,
) -> EntStatus {
    guard(|| {
        let dims = slice(dims, n_parties, "dims")?.to_vec();
        let re = slice(re, len, "re")?;
        let amps = if im.is_null() {
            re.iter().map(|&r| c(r, 0.0)).collect()
        } else {
            re.iter().zip(slice(im, len, "im")?).map(|(&r, &i)| c(r, i)).collect()
        };
        put_state(out, StateVector::new(dims, amps)?)
    })
}

/// Parse a pure state from the JSON state-file format.
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ent_state_from_json(json: *const c_char, out: *mut *mut EntState) -> EntStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(EntStatus::Parse, format!("json is not UTF-8: {e}")))?;
        match parse_state(text)? {
            StateInput::Pure(psi) => put_state(out, psi),
            StateInput::Mixed(_) => Err(Failure(EntStatus::InvalidArgument, "expected a pure state (\"amps\")".into())),
        }
    })
}

fn qubit_count(n: usize) -> Result<(), Failure> {
    if n == 0 || n > ENT_MAX_QUBITS {
        return Err(Failure(EntStatus::InvalidArgument, format!("qubit count {n} outside 1..={ENT_MAX_QUBITS}")));
    }
    Ok(())
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ent_state_ghz(n_qubits: usize, out: *mut *mut EntState) -> EntStatus {
    guard(|| {
        qubit_count(n_qubits)?;
        put_state(out, StateVector::ghz(n_qubits))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ent_state_w(n_qubits: usize, out: *mut *mut EntState) -> EntStatus {
    guard(|| {
        qubit_count(n_qubits)?;
        put_state(out, StateVector::w(n_qubits))
    })
}

/// Release a state. NULL is ignored.
///
/// # Safety
/// `state` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ent_state_free(state: *mut EntState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_state_dim(state: *const EntState, out: *mut usize) -> EntStatus {
    guard(|| put(out, handle(state)?.dim()))
}

/// # Safety
/// `state` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_state_n_parties(state: *const EntState, out: *mut usize) -> EntStatus {
    guard(|| put(out, handle(state)?.dims().len()))
}

/// Copy amplitudes into `re`/`im`, each of capacity `cap`.
///
/// # Safety
/// `re` and `im` must hold `cap` doubles; `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_state_amplitudes(
    state: *const EntState,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> EntStatus {
    guard(|| {
        let amps = handle(state)?.amps();
        let (r, i): (Vec<f64>, Vec<f64>) = amps.iter().map(|z| (z.re, z.im)).unzip();
        fill(&r, re, cap, out_len)?;
        fill(&i, im, cap, out_len)
    })
}

/// Serialize a state to JSON. Free the result with [`ent_string_free`].
///
/// # Safety
/// `state` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_state_to_json(state: *const EntState, out: *mut *mut c_char) -> EntStatus {
    guard(|| {
        let text = state_to_json(handle(state)?).to_string();
        put(out, CString::new(text).expect("JSON has no NULs").into_raw())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ent_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Entanglement entropy in bits across the cut `cut | complement`.
///
/// # Safety
/// `cut` must point to `n_cut` labels; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_entanglement_entropy(
    state: *const EntState,
    cut: *const usize,
    n_cut: usize,
    out: *mut f64,
) -> EntStatus {
    guard(|| put(out, entanglement_entropy(handle(state)?, &cut_set(cut, n_cut)?)?))
}

/// Squared Schmidt coefficients in descending order.
///
/// # Safety
/// `buf` must hold `cap` doubles; `cut` must point to `n_cut` labels.
#[no_mangle]
pub unsafe extern "C" fn ent_schmidt_coefficients(
    state: *const EntState,
    cut: *const usize,
    n_cut: usize,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> EntStatus {
    guard(|| {
        let sd = schmidt_decompose(handle(state)?, &cut_set(cut, n_cut)?)?;
        fill(&sd.coefficients, buf, cap, out_len)
    })
}

/// # Safety
/// `state` must be a live two-qubit handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_concurrence(state: *const EntState, out: *mut f64) -> EntStatus {
    guard(|| put(out, concurrence(handle(state)?)?))
}

/// # Safety
/// `state` must be a live three-qubit handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_three_tangle(state: *const EntState, out: *mut f64) -> EntStatus {
    guard(|| put(out, three_tangle(handle(state)?)?))
}

/// # Safety
/// `state` must be a live three-qubit handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_slocc_classify(state: *const EntState, out: *mut EntSloccClass) -> EntStatus {
    guard(|| put(out, slocc_classify(handle(state)?)?.into()))
}

/// Geometric measure with the given restart count and seed.
///
/// # Safety
/// `state` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ent_geometric_measure(
    state: *const EntState,
    restarts: usize,
    seed: u64,
    out: *mut f64,
) -> EntStatus {
    guard(|| {
        let config = OptimizerConfig { restarts, seed, ..OptimizerConfig::default() };
        put(out, geometric_measure(handle(state)?, &config)?.value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status() {
        let st = guard(|| panic!("boom"));
        assert_eq!(st, EntStatus::Panic);
        let msg = unsafe { CStr::from_ptr(ent_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
    }

    #[test]
    fn error_kinds_map_to_codes() {
        let code = |e: Error| Failure::from(e).0;
        assert_eq!(code(Error::NotNormalized { norm: 2.0 }), EntStatus::InvalidState);
        assert_eq!(code(Error::Parse("x".into())), EntStatus::Parse);
        assert_eq!(code(Error::TrivialCut), EntStatus::InvalidArgument);
        assert_eq!(code(Error::NumericalDegeneracy("x".into())), EntStatus::Numerical);
    }

    #[test]
    fn short_buffers_report_needed_length() {
        let mut len = 0;
        let r = unsafe { fill(&[1.0, 2.0, 3.0], ptr::null_mut(), 0, &mut len) };
        assert!(matches!(r, Err(Failure(EntStatus::BufferTooSmall, _))));
        assert_eq!(len, 3);
    }
}
