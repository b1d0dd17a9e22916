//! C ABI over `qrecov`.
//!
//! States and instances are opaque heap handles created by `*_new` functions
//! and released with the matching `*_free`. Every fallible call returns a
//! [`QrecovStatus`]; on failure a message is kept per thread and can be read
//! with [`qrecov_last_error`]. Strings returned to the caller are owned by the
//! caller and must be released with [`qrecov_string_free`].
//!
//! Matrices are passed as row-major arrays of `dim * dim` doubles, real and
//! imaginary parts separately. Optional scalar parameters use NaN for "unset".

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qrecov::bounds::{BoundParams, CertificateContext, Instance, TheoremId, DEFAULT_TOLERANCE};
use qrecov::divergence::{
    holevo_fidelity, max_quasi, max_relative_entropy, petz_renyi, petz_renyi_quasi, q_x2, q_xinv, sandwiched,
    sandwiched_quasi, uhlmann_fidelity, umegaki,
};
use qrecov::qmat::{random_density, CMat, DensityOperator, Subsystem, C64};
use qrecov::recovery::SubalgebraSpec;
use qrecov::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrecovStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    InvalidState = 4,
    NotFaithful = 5,
    ParseError = 6,
    NumericalError = 7,
    Panic = 8,
}

/// Divergences computable through [`qrecov_divergence`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrecovDivergence {
    /// `D(ρ‖σ)`; parameter ignored.
    Umegaki = 0,
    /// Petz–Rényi `D_α`; parameter is `α`.
    PetzRenyi = 1,
    /// `Q_s = tr(ρ^{1-s} σ^s)`; parameter is `s`.
    PetzQuasi = 2,
    /// Sandwiched `D̃_α`; parameter is `α`.
    Sandwiched = 3,
    /// Sandwiched quasi-entropy `Q̃_α`; parameter is `α`.
    SandwichedQuasi = 4,
    MaxRelative = 5,
    HolevoFidelity = 6,
    UhlmannFidelity = 7,
    /// `tr(ρ^{-1} σ²)`.
    QXSquare = 8,
    /// `tr(ρ² σ^{-1})`.
    QXInverse = 9,
    MaxQuasi = 10,
}

/// Opaque density operator.
pub struct QrecovState {
    inner: DensityOperator,
}

/// Opaque state pair with a subalgebra, ready for certificates.
pub struct QrecovInstance {
    ctx: CertificateContext,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> QrecovStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::NotSquare { .. } => QrecovStatus::DimensionMismatch,
        Error::NonHermitianInput { .. } | Error::InvalidDensity(_) | Error::InvalidRank { .. } => {
            QrecovStatus::InvalidState
        }
        Error::NonFaithful(_) => QrecovStatus::NotFaithful,
        Error::Parse(_) | Error::Json(_) => QrecovStatus::ParseError,
        Error::ParamOutOfRange(_)
        | Error::Config(_)
        | Error::InvalidSubalgebra(_)
        | Error::InvalidChannel(_)
        | Error::NegativeLambda(_)
        | Error::NotRegular(_) => QrecovStatus::InvalidArgument,
        _ => QrecovStatus::NumericalError,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (QrecovStatus, String)>) -> QrecovStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrecovStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QrecovStatus::Panic
        }
    }
}

fn lib<T>(r: qrecov::Result<T>) -> Result<T, (QrecovStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (QrecovStatus, String) {
    (QrecovStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (QrecovStatus, String) {
    (QrecovStatus::InvalidArgument, msg.into())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (QrecovStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn opt(x: f64) -> Option<f64> {
    (!x.is_nan()).then_some(x)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qrecov_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qrecov_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a density operator from a row-major `dim x dim` matrix.
/// `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `dim * dim` doubles; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrecov_state_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QrecovState,
) -> QrecovStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        let n = dim.checked_mul(dim).ok_or_else(|| invalid("dimension overflows"))?;
        let re = std::slice::from_raw_parts(re, n);
        let im = (!im.is_null()).then(|| std::slice::from_raw_parts(im, n));
        let m = CMat::from_fn(dim, dim, |i, j| {
            let k = i * dim + j;
            C64::new(re[k], im.map_or(0.0, |v| v[k]))
        });
        let inner = lib(DensityOperator::from_matrix(m))?;
        *out = Box::into_raw(Box::new(QrecovState { inner }));
        Ok(())
    })
}

/// Ginibre-random full-rank state, deterministic per seed.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrecov_state_random(dim: usize, seed: u64, out: *mut *mut QrecovState) -> QrecovStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = lib(random_density(dim, dim, seed))?;
        *out = Box::into_raw(Box::new(QrecovState { inner }));
        Ok(())
    })
}

/// Dimension of a state, or 0 for null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qrecov_state_dim(state: *const QrecovState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dim())
}

/// Copies the (possibly clipped) state matrix into row-major buffers of
/// `dim * dim` doubles.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` must hold `dim * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn qrecov_state_matrix(state: *const QrecovState, re: *mut f64, im: *mut f64) -> QrecovStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let m = s.inner.mat();
        let d = m.nrows();
        for i in 0..d {
            for j in 0..d {
                *re.add(i * d + j) = m[(i, j)].re;
                *im.add(i * d + j) = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrecov_state_free(state: *mut QrecovState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Evaluates a divergence of `(rho, sigma)`. `param` is the order where the
/// divergence takes one and is ignored otherwise.
///
/// # Safety
/// `rho` and `sigma` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrecov_divergence(
    rho: *const QrecovState,
    sigma: *const QrecovState,
    kind: QrecovDivergence,
    param: f64,
    out: *mut f64,
) -> QrecovStatus {
    guard(|| {
        let (r, s) = (&deref(rho, "rho")?.inner, &deref(sigma, "sigma")?.inner);
        if out.is_null() {
            return Err(null("out"));
        }
        use QrecovDivergence as K;
        let v = lib(match kind {
            K::Umegaki => umegaki(r, s),
            K::PetzRenyi => petz_renyi(r, s, param),
            K::PetzQuasi => petz_renyi_quasi(r, s, param),
            K::Sandwiched => sandwiched(r, s, param),
            K::SandwichedQuasi => sandwiched_quasi(r, s, param),
            K::MaxRelative => max_relative_entropy(r, s),
            K::HolevoFidelity => holevo_fidelity(r, s),
            K::UhlmannFidelity => uhlmann_fidelity(r, s),
            K::QXSquare => q_x2(r, s),
            K::QXInverse => q_xinv(r, s),
            K::MaxQuasi => max_quasi(r, s),
        })?;
        *out = v;
        Ok(())
    })
}

fn make_instance(inst: Instance) -> Result<*mut QrecovInstance, (QrecovStatus, String)> {
    let ctx = lib(CertificateContext::new(inst))?;
    Ok(Box::into_raw(Box::new(QrecovInstance { ctx })))
}

/// Instance on `C^{d_a} ⊗ C^{d_b}` whose subalgebra is the first factor when
/// `keep_first` is nonzero and the second otherwise. The states are copied.
///
/// # Safety
/// `rho` and `sigma` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrecov_instance_new_tensor(
    rho: *const QrecovState,
    sigma: *const QrecovState,
    d_a: usize,
    d_b: usize,
    keep_first: c_int,
    out: *mut *mut QrecovInstance,
) -> QrecovStatus {
    guard(|| {
        let (r, s) = (&deref(rho, "rho")?.inner, &deref(sigma, "sigma")?.inner);
        if out.is_null() {
            return Err(null("out"));
        }
        let keep = if keep_first != 0 { Subsystem::A } else { Subsystem::B };
        let n = lib(SubalgebraSpec::tensor_factor(d_a, d_b, keep))?;
        *out = make_instance(lib(Instance::new(r.clone(), s.clone(), n))?)?;
        Ok(())
    })
}

/// Parses an instance from its JSON state-file form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrecov_instance_from_json(json: *const c_char, out: *mut *mut QrecovInstance) -> QrecovStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (QrecovStatus::ParseError, e.to_string()))?;
        let inst: Instance = serde_json::from_str(text).map_err(|e| (QrecovStatus::ParseError, e.to_string()))?;
        *out = make_instance(inst)?;
        Ok(())
    })
}

/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrecov_instance_free(inst: *mut QrecovInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Measured trace distance of a rotated Petz recovery: `‖σ - R_ρ^t(σ_N)‖₁`
/// when `reverse` is zero, `‖ρ - R_σ^t(ρ_N)‖₁` otherwise.
///
/// # Safety
/// `inst` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qrecov_recovery_error(
    inst: *const QrecovInstance,
    reverse: c_int,
    t: f64,
    out: *mut f64,
) -> QrecovStatus {
    guard(|| {
        let i = deref(inst, "instance")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lib(i.ctx.recovery_error(reverse != 0, t))?;
        Ok(())
    })
}

/// Evaluates one theorem certificate and returns it as a JSON string.
/// `s`, `alpha` and `epsilon` are NaN when unset; a NaN or negative
/// `tolerance` selects the default. `passed` may be null.
///
/// # Safety
/// `inst` must be a live handle, `theorem_id` a NUL-terminated string and
/// `out_json` a valid pointer. The returned string must be released with
/// [`qrecov_string_free`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn qrecov_certificate_json(
    inst: *const QrecovInstance,
    theorem_id: *const c_char,
    t: f64,
    s: f64,
    alpha: f64,
    epsilon: f64,
    tolerance: f64,
    out_json: *mut *mut c_char,
    passed: *mut c_int,
) -> QrecovStatus {
    guard(|| {
        let i = deref(inst, "instance")?;
        if theorem_id.is_null() {
            return Err(null("theorem_id"));
        }
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let id_str = CStr::from_ptr(theorem_id)
            .to_str()
            .map_err(|e| invalid(e.to_string()))?;
        let id: TheoremId = lib(id_str.parse())?;
        let mut p = BoundParams::new(id, t);
        (p.s, p.alpha, p.epsilon) = (opt(s), opt(alpha), opt(epsilon));
        let tol = if tolerance >= 0.0 { tolerance } else { DEFAULT_TOLERANCE };
        let cert = lib(i.ctx.certificate_with_tolerance(&p, tol))?;
        let text = serde_json::to_string(&cert).map_err(|e| (QrecovStatus::NumericalError, e.to_string()))?;
        let c = CString::new(text).map_err(|e| invalid(e.to_string()))?;
        if !passed.is_null() {
            *passed = c_int::from(cert.passed);
        }
        *out_json = c.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrecov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
