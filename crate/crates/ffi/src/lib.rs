//! C ABI for the chain-entropy library: opaque chain handles, status codes
//! and a thread-local error message. The header is generated by cbindgen at
//! build time into `include/chain_entropy.h`.

use chain_entropy::asymptotics::{self, ClosedFormModel};
use chain_entropy::chain::{CouplingSet, CriticalClass};
use chain_entropy::correlation::{self, CorrelationMode, SubsystemSpec};
use chain_entropy::error::Error;
use chain_entropy::io::ChainSpecFile;
use chain_entropy::mobius;
use chain_entropy::riemann::entropy::{entropy_contour, DeterminantFactor};
use chain_entropy::riemann::HyperellipticCurve;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeStatus {
    CeOk = 0,
    CeErrDomain = 1,
    CeErrConstraint = 2,
    CeErrNumerical = 3,
    CeErrStructure = 4,
    CeErrAdmissibility = 5,
    CeErrAccuracy = 6,
    CeErrUnsupported = 7,
    CeErrUsage = 8,
    CeErrNullPointer = 9,
    CeErrPanic = 10,
}

/// Ground-state phase of a chain.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeClass {
    CeGapped = 0,
    CeCriticalParityPreserving = 1,
    CeCriticalDiracSea = 2,
}

/// Opaque chain handle.
pub struct CeChain {
    inner: CouplingSet,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> CeStatus {
    match err {
        Error::Domain(_) => CeStatus::CeErrDomain,
        Error::Constraint { .. } => CeStatus::CeErrConstraint,
        Error::Numerical(_) | Error::Degenerate(_) => CeStatus::CeErrNumerical,
        Error::Structure(_) | Error::Ordering(_) => CeStatus::CeErrStructure,
        Error::Admissibility { .. } | Error::Pole { .. } => CeStatus::CeErrAdmissibility,
        Error::Accuracy(_) | Error::ThetaNull(_) | Error::Fit(_) | Error::Contour(_) => {
            CeStatus::CeErrAccuracy
        }
        Error::Unsupported(_) | Error::Integration(_) => CeStatus::CeErrUnsupported,
        Error::Usage(_) | Error::Io(_) => CeStatus::CeErrUsage,
    }
}

fn guarded<F: FnOnce() -> Result<(), (CeStatus, String)>>(f: F) -> CeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CeStatus::CeOk,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CeStatus::CeErrPanic
        }
    }
}

fn fail(e: Error) -> (CeStatus, String) {
    (status_of(&e), e.to_string())
}

/// Message describing the most recent error on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ce_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Build a nearest-neighbour chain handle from the three standard
/// parameters. The caller owns the handle and must free it.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ce_chain_xydm(
    gamma: f64,
    s: f64,
    h: f64,
    out: *mut *mut CeChain,
) -> CeStatus {
    guarded(|| {
        if out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let chain = CouplingSet::xy_dm(gamma, s, h);
        unsafe { *out = Box::into_raw(Box::new(CeChain { inner: chain })) };
        Ok(())
    })
}

/// Parse a chain specification (the same JSON the CLI accepts).
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ce_chain_from_json(
    json: *const c_char,
    out: *mut *mut CeChain,
) -> CeStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null pointer argument".into()));
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|_| (CeStatus::CeErrUsage, "invalid UTF-8".to_string()))?;
        let spec: ChainSpecFile = serde_json::from_str(text).map_err(|e| fail(Error::from(e)))?;
        let chain = spec.to_couplings().map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(CeChain { inner: chain })) };
        Ok(())
    })
}

/// Release a chain handle.
///
/// # Safety
/// `chain` must come from a `ce_chain_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ce_chain_free(chain: *mut CeChain) {
    if !chain.is_null() {
        drop(unsafe { Box::from_raw(chain) });
    }
}

unsafe fn borrow<'a>(chain: *const CeChain) -> Result<&'a CouplingSet, (CeStatus, String)> {
    if chain.is_null() {
        return Err((CeStatus::CeErrNullPointer, "null chain handle".into()));
    }
    Ok(&unsafe { &*chain }.inner)
}

/// Single-particle dispersion at angle `theta`.
///
/// # Safety
/// `chain` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ce_dispersion(
    chain: *const CeChain,
    theta: f64,
    out: *mut f64,
) -> CeStatus {
    guarded(|| {
        let c = unsafe { borrow(chain) }?;
        if out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        unsafe { *out = c.dispersion(theta) };
        Ok(())
    })
}

/// Phase classification with the pinching and insertion counts.
///
/// # Safety
/// `chain` must be a live handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn ce_classify(
    chain: *const CeChain,
    class_out: *mut CeClass,
    pinchings_out: *mut usize,
    insertions_out: *mut usize,
) -> CeStatus {
    guarded(|| {
        let c = unsafe { borrow(chain) }?;
        if class_out.is_null() || pinchings_out.is_null() || insertions_out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let report = c.classify(1e-9).map_err(fail)?;
        let class = match report.class {
            CriticalClass::Gapped => CeClass::CeGapped,
            CriticalClass::CriticalParityPreservingVacuum => CeClass::CeCriticalParityPreserving,
            CriticalClass::CriticalDiracSea => CeClass::CeCriticalDiracSea,
        };
        unsafe {
            *class_out = class;
            *pinchings_out = report.r;
            *insertions_out = report.q;
        }
        Ok(())
    })
}

/// Renyi entropy of a single interval of `x_size` sites in the
/// thermodynamic limit.
///
/// # Safety
/// `chain` must be a live handle; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn ce_interval_entropy(
    chain: *const CeChain,
    alpha: f64,
    x_size: usize,
    s_out: *mut f64,
    z_out: *mut f64,
) -> CeStatus {
    guarded(|| {
        let c = unsafe { borrow(chain) }?;
        if s_out.is_null() || z_out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let res = correlation::subsystem_entropy(
            c,
            &SubsystemSpec::single(x_size),
            alpha,
            CorrelationMode::thermodynamic(),
        )
        .map_err(fail)?;
        unsafe {
            *s_out = res.s_alpha;
            *z_out = res.z_alpha;
        }
        Ok(())
    })
}

/// Entanglement half-spectrum of a single interval; writes at most
/// `capacity` values and reports the full length.
///
/// # Safety
/// `chain` must be a live handle; `buffer` must have room for `capacity`
/// doubles; `written` writable.
#[no_mangle]
pub unsafe extern "C" fn ce_interval_spectrum(
    chain: *const CeChain,
    x_size: usize,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> CeStatus {
    guarded(|| {
        let c = unsafe { borrow(chain) }?;
        if buffer.is_null() || written.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let v = correlation::build_correlation(
            c,
            &SubsystemSpec::single(x_size),
            CorrelationMode::thermodynamic(),
        )
        .map_err(fail)?;
        let spec = correlation::entanglement_spectrum(&v).map_err(fail)?;
        let n = spec.len().min(capacity);
        for (k, &nu) in spec.iter().take(n).enumerate() {
            unsafe { *buffer.add(k) = nu };
        }
        unsafe { *written = spec.len() };
        Ok(())
    })
}

/// Theta-function entropy of a gapped real-coupling chain.
///
/// # Safety
/// `chain` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ce_theta_entropy(
    chain: *const CeChain,
    alpha: f64,
    x_size: usize,
    out: *mut f64,
) -> CeStatus {
    guarded(|| {
        let c = unsafe { borrow(chain) }?;
        if out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let curve = HyperellipticCurve::from_chain(c).map_err(fail)?;
        let factor = DeterminantFactor::from_curve(&curve).map_err(fail)?;
        let s = entropy_contour(&factor, alpha, x_size).map_err(fail)?;
        unsafe { *out = s };
        Ok(())
    })
}

/// The universal constant entering the critical closed forms.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ce_i_alpha(alpha: f64, out: *mut f64) -> CeStatus {
    guarded(|| {
        if out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let v = asymptotics::i_alpha(alpha).map_err(fail)?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Scaling dimension `(1/alpha - alpha)/24`.
#[no_mangle]
pub extern "C" fn ce_delta_alpha(alpha: f64) -> f64 {
    asymptotics::delta_alpha(alpha)
}

/// Closed-form kinds accepted by `ce_closed_form`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeClosedForm {
    CeCriticalXx = 0,
    CeIsingLine = 1,
    CeXxDm = 2,
}

/// Printed asymptotic entropy of the tabulated critical models. `p1, p2`
/// are (h, unused), (gamma, unused) or (s, h) per the kind.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ce_closed_form(
    kind: CeClosedForm,
    p1: f64,
    p2: f64,
    x_size: f64,
    alpha: f64,
    out: *mut f64,
) -> CeStatus {
    guarded(|| {
        if out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let model = match kind {
            CeClosedForm::CeCriticalXx => ClosedFormModel::CriticalXx { h: p1 },
            CeClosedForm::CeIsingLine => ClosedFormModel::IsingLine { gamma: p1 },
            CeClosedForm::CeXxDm => ClosedFormModel::XxDm { s: p1, h: p2 },
        };
        let v = asymptotics::closed_form(model, x_size, alpha).map_err(fail)?;
        unsafe { *out = v };
        Ok(())
    })
}

/// Boost flow of the nearest-neighbour couplings.
///
/// # Safety
/// Output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ce_transform_xydm(
    zeta: f64,
    gamma: f64,
    s: f64,
    h: f64,
    gamma_out: *mut f64,
    s_out: *mut f64,
    h_out: *mut f64,
) -> CeStatus {
    guarded(|| {
        if gamma_out.is_null() || s_out.is_null() || h_out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let (g, sp, hp) = mobius::transform_xydm(zeta, gamma, s, h).map_err(fail)?;
        unsafe {
            *gamma_out = g;
            *s_out = sp;
            *h_out = hp;
        }
        Ok(())
    })
}

/// Apply a boost to a chain handle, producing a new handle.
///
/// # Safety
/// `chain` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ce_chain_boost(
    chain: *const CeChain,
    zeta: f64,
    out: *mut *mut CeChain,
) -> CeStatus {
    guarded(|| {
        let c = unsafe { borrow(chain) }?;
        if out.is_null() {
            return Err((CeStatus::CeErrNullPointer, "null output pointer".into()));
        }
        let moved = mobius::MobiusMap::boost(zeta)
            .transform_couplings(c)
            .map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(CeChain { inner: moved })) };
        Ok(())
    })
}
