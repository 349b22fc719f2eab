//! C ABI over `qcovmap`.
//!
//! Every fallible function returns a [`QcmStatus`]; on failure a message is
//! available from [`qcm_last_error_message`] until the next call on the same
//! thread. Objects are opaque handles released with their `_free` function.
//! Matrices cross the boundary as separate row-major real and imaginary
//! `double` arrays.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use qcovmap::analysis::{self, Factor};
use qcovmap::bloch::BlochVector;
use qcovmap::covmap::{self, MapParams};
use qcovmap::linalg::CMatrix;
use qcovmap::processes;
use qcovmap::state::DensityMatrix;
use qcovmap::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidDimension = 2,
    InvalidArgument = 3,
    NotAState = 4,
    IndexOutOfRange = 5,
    BufferTooSmall = 6,
    Internal = 7,
    Panic = 8,
}

/// Map parameters `(N, alpha, beta, C)`.
pub struct QcmParams(MapParams);

/// A density matrix.
pub struct QcmState(DensityMatrix);

/// Canonical-output coefficients and positivity margin.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct QcmCoefficients {
    pub m11: f64,
    pub m12: f64,
    pub m23: f64,
    pub cross: f64,
    pub c: f64,
    /// Smallest positivity slack; negative means unphysical.
    pub margin: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QcmStatus {
    match e {
        Error::Dimension(_) => QcmStatus::InvalidDimension,
        Error::Index { .. } => QcmStatus::IndexOutOfRange,
        Error::NotAState(_) => QcmStatus::NotAState,
        Error::Validation(_) => QcmStatus::InvalidArgument,
        _ => QcmStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Status(QcmStatus, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QcmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcmStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            QcmStatus::NullPointer
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            QcmStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

unsafe fn read_matrix(d: usize, re: *const f64, im: *const f64) -> Result<CMatrix, Fail> {
    if re.is_null() {
        return Err(Fail::Null("re"));
    }
    let len = d.checked_mul(d).ok_or_else(|| {
        Fail::Status(
            QcmStatus::InvalidDimension,
            format!("dimension {d} too large"),
        )
    })?;
    let re = std::slice::from_raw_parts(re, len);
    let im = if im.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(im, len))
    };
    Ok(CMatrix::from_fn(d, d, |r, c| {
        let k = r * d + c;
        Complex64::new(re[k], im.map_or(0.0, |v| v[k]))
    }))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn qcm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates map parameters. `N` must be at least 2 and the reals finite.
#[no_mangle]
pub unsafe extern "C" fn qcm_params_new(
    n: usize,
    alpha: f64,
    beta: f64,
    c: f64,
    out: *mut *mut QcmParams,
) -> QcmStatus {
    guard(|| {
        let p = MapParams::new(n, alpha, beta, c)?;
        put(out, boxed(QcmParams(p)), "out")
    })
}

/// Parameters of the optimal universal cloner.
#[no_mangle]
pub unsafe extern "C" fn qcm_params_cloning(n: usize, out: *mut *mut QcmParams) -> QcmStatus {
    guard(|| put(out, boxed(QcmParams(processes::cloning_params(n)?)), "out"))
}

/// Parameters of the optimal universal entangler.
#[no_mangle]
pub unsafe extern "C" fn qcm_params_entangling(n: usize, out: *mut *mut QcmParams) -> QcmStatus {
    guard(|| {
        put(
            out,
            boxed(QcmParams(processes::entangling_params(n)?)),
            "out",
        )
    })
}

/// Reads back the parameters. Any output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn qcm_params_get(
    params: *const QcmParams,
    n: *mut usize,
    alpha: *mut f64,
    beta: *mut f64,
    c: *mut f64,
) -> QcmStatus {
    guard(|| {
        let p = &get(params, "params")?.0;
        if !n.is_null() {
            *n = p.n;
        }
        if !alpha.is_null() {
            *alpha = p.alpha;
        }
        if !beta.is_null() {
            *beta = p.beta;
        }
        if !c.is_null() {
            *c = p.c;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qcm_params_free(params: *mut QcmParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Canonical-output coefficients and positivity margin of `params`.
#[no_mangle]
pub unsafe extern "C" fn qcm_canonical_coefficients(
    params: *const QcmParams,
    out: *mut QcmCoefficients,
) -> QcmStatus {
    guard(|| {
        let k = covmap::canonical_coefficients(&get(params, "params")?.0);
        let flags = covmap::positivity_flags(&k);
        let v = QcmCoefficients {
            m11: k.m11,
            m12: k.m12,
            m23: k.m23,
            cross: k.cross,
            c: k.c,
            margin: flags.margin,
        };
        put(out, v, "out")
    })
}

/// Writes 1 to `out` if the map is physical (all positivity slacks ≥ −1e-12), else 0.
#[no_mangle]
pub unsafe extern "C" fn qcm_params_is_physical(
    params: *const QcmParams,
    out: *mut i32,
) -> QcmStatus {
    guard(|| {
        let ok = covmap::is_physical(&get(params, "params")?.0);
        put(out, i32::from(ok), "out")
    })
}

/// Output of the map on the canonical input `|1⟩⟨1|`.
#[no_mangle]
pub unsafe extern "C" fn qcm_apply_canonical(
    params: *const QcmParams,
    out: *mut *mut QcmState,
) -> QcmStatus {
    guard(|| {
        let p = &get(params, "params")?.0;
        let rho = covmap::apply(p, &BlochVector::canonical(p.n)?)?;
        put(out, boxed(QcmState(rho)), "out")
    })
}

/// Output of the map on the Bloch coefficients `m` (row-major `N × N`,
/// `m_im` may be null for a real `m`).
#[no_mangle]
pub unsafe extern "C" fn qcm_apply(
    params: *const QcmParams,
    m_re: *const f64,
    m_im: *const f64,
    out: *mut *mut QcmState,
) -> QcmStatus {
    guard(|| {
        let p = &get(params, "params")?.0;
        let m = BlochVector::new(read_matrix(p.n, m_re, m_im)?)?;
        put(out, boxed(QcmState(covmap::apply(p, &m)?)), "out")
    })
}

/// Builds a state from a row-major `d × d` matrix (`im` may be null). The
/// matrix must be Hermitian with unit trace.
#[no_mangle]
pub unsafe extern "C" fn qcm_state_new(
    d: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QcmState,
) -> QcmStatus {
    guard(|| {
        if d == 0 {
            return Err(Fail::Status(
                QcmStatus::InvalidDimension,
                "dimension must be positive".into(),
            ));
        }
        let rho = DensityMatrix::new(read_matrix(d, re, im)?)?;
        put(out, boxed(QcmState(rho)), "out")
    })
}

/// The optimal entangler output, a uniform mixture of antisymmetric Bell states.
#[no_mangle]
pub unsafe extern "C" fn qcm_entangled_output(n: usize, out: *mut *mut QcmState) -> QcmStatus {
    guard(|| put(out, boxed(QcmState(processes::entangled_output(n)?)), "out"))
}

/// The optimal cloner output for input `|1⟩`.
#[no_mangle]
pub unsafe extern "C" fn qcm_cloning_output(n: usize, out: *mut *mut QcmState) -> QcmStatus {
    guard(|| put(out, boxed(QcmState(processes::cloning_output(n)?)), "out"))
}

#[no_mangle]
pub unsafe extern "C" fn qcm_state_dim(state: *const QcmState, out: *mut usize) -> QcmStatus {
    guard(|| put(out, get(state, "state")?.0.dim(), "out"))
}

/// Copies the matrix into caller buffers of `len ≥ d²` doubles each, row-major.
/// `im` may be null.
#[no_mangle]
pub unsafe extern "C" fn qcm_state_copy_entries(
    state: *const QcmState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QcmStatus {
    guard(|| {
        let rho = &get(state, "state")?.0;
        if re.is_null() {
            return Err(Fail::Null("re"));
        }
        let d = rho.dim();
        if len < d * d {
            return Err(Fail::Status(
                QcmStatus::BufferTooSmall,
                format!("buffer holds {len} entries, {} needed", d * d),
            ));
        }
        for r in 0..d {
            for c in 0..d {
                let v = rho.entry(r, c);
                *re.add(r * d + c) = v.re;
                if !im.is_null() {
                    *im.add(r * d + c) = v.im;
                }
            }
        }
        Ok(())
    })
}

/// Von Neumann entropy in nats.
#[no_mangle]
pub unsafe extern "C" fn qcm_state_entropy(state: *const QcmState, out: *mut f64) -> QcmStatus {
    guard(|| {
        put(
            out,
            analysis::von_neumann_entropy(&get(state, "state")?.0)?,
            "out",
        )
    })
}

/// Smallest eigenvalue of the partial transpose on the second factor.
#[no_mangle]
pub unsafe extern "C" fn qcm_state_ppt_min_eig(state: *const QcmState, out: *mut f64) -> QcmStatus {
    guard(|| {
        put(
            out,
            analysis::partial_transpose_min_eig(&get(state, "state")?.0)?,
            "out",
        )
    })
}

/// Smallest mixing weight with the maximally mixed state that still leaves
/// the state inside the full state space.
#[no_mangle]
pub unsafe extern "C" fn qcm_state_epsilon(state: *const QcmState, out: *mut f64) -> QcmStatus {
    guard(|| {
        put(
            out,
            analysis::epsilon_separation(&get(state, "state")?.0)?,
            "out",
        )
    })
}

/// Traces out factor `traced` (1 or 2) of a two-particle state.
#[no_mangle]
pub unsafe extern "C" fn qcm_state_partial_trace(
    state: *const QcmState,
    traced: u8,
    out: *mut *mut QcmState,
) -> QcmStatus {
    guard(|| {
        let factor = Factor::try_from(traced)?;
        let r = analysis::partial_trace(&get(state, "state")?.0, factor)?;
        put(out, boxed(QcmState(r)), "out")
    })
}

/// JSON `{"d":…, "re":[…], "im":[…]}`; release with [`qcm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qcm_state_to_json(
    state: *const QcmState,
    out: *mut *mut c_char,
) -> QcmStatus {
    guard(|| {
        let s = serde_json::to_string(&get(state, "state")?.0.to_json())
            .map_err(|e| Fail::Status(QcmStatus::Internal, e.to_string()))?;
        let c = CString::new(s).map_err(|e| Fail::Status(QcmStatus::Internal, e.to_string()))?;
        put(out, c.into_raw(), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn qcm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn qcm_state_free(state: *mut QcmState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// `ln(N(N−1)/2)`.
#[no_mangle]
pub unsafe extern "C" fn qcm_optimal_entropy(n: usize, out: *mut f64) -> QcmStatus {
    guard(|| put(out, processes::optimal_entropy(n)?, "out"))
}
