//! C ABI for `opradius`.
//!
//! Every entry point returns an [`OprStatus`]. Results are written through
//! out-pointers. On failure a description is available from
//! [`opr_last_error`] on the same thread until the next call.
//!
//! Matrices and norms are opaque handles created by `opr_*_new`/`parse`
//! functions and released with the matching `free`. Strings returned by the
//! library are released with [`opr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use opradius::inequalities::run_suite;
use opradius::radius::{self, Argmax};
use opradius::sampling::{self, SamplerSpec};
use opradius::{Error, Matrix, NormDescriptor, RadiusOptions, RadiusResult};

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OprStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Bad dimension, options, norm selector, sampler or mismatched sizes.
    InvalidArgument = 2,
    /// Malformed JSON or a string that is not UTF-8.
    Parse = 3,
    /// A numerical kernel failed.
    Numerical = 4,
    Io = 5,
    /// The library panicked. This is a bug.
    Panic = 6,
}

/// Opaque square complex matrix.
pub struct OprMatrix(Matrix);

/// Opaque norm descriptor.
pub struct OprNorm(NormDescriptor);

/// Grid options; see [`opr_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OprOptions {
    pub theta_grid: usize,
    pub t_grid: usize,
    pub phi_grid: usize,
    pub refine_passes: usize,
    pub refine_tol: f64,
    pub escalation_rounds: usize,
}

impl From<RadiusOptions> for OprOptions {
    fn from(o: RadiusOptions) -> Self {
        Self {
            theta_grid: o.theta_grid,
            t_grid: o.t_grid,
            phi_grid: o.phi_grid,
            refine_passes: o.refine_passes,
            refine_tol: o.refine_tol,
            escalation_rounds: o.escalation_rounds,
        }
    }
}

impl From<OprOptions> for RadiusOptions {
    fn from(o: OprOptions) -> Self {
        Self {
            theta_grid: o.theta_grid,
            t_grid: o.t_grid,
            phi_grid: o.phi_grid,
            refine_passes: o.refine_passes,
            refine_tol: o.refine_tol,
            escalation_rounds: o.escalation_rounds,
        }
    }
}

/// A radius value with its maximizing angles.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OprRadius {
    pub value: f64,
    pub theta: f64,
    pub t: f64,
    pub phi: f64,
    pub escalations_used: usize,
}

impl From<RadiusResult> for OprRadius {
    fn from(r: RadiusResult) -> Self {
        let Argmax { theta, t, phi } = r.argmax;
        Self {
            value: r.value,
            theta,
            t,
            phi,
            escalations_used: r.escalations_used,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: OprStatus,
    message: String,
}

impl Failure {
    fn null(name: &str) -> Self {
        Self {
            status: OprStatus::NullPointer,
            message: format!("`{name}` is null"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            _ if e.is_numerical() => OprStatus::Numerical,
            Error::Parse(_) | Error::Json(_) => OprStatus::Parse,
            Error::Io(_) | Error::File { .. } => OprStatus::Io,
            _ => OprStatus::InvalidArgument,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

fn set_last_error(message: Option<String>) {
    let message = message.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> OprStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(None);
            OprStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(Some(f.message));
            f.status
        }
        Err(payload) => {
            let detail = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(Some(format!("internal panic: {detail}")));
            OprStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(name))
}

unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::null(name));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure {
        status: OprStatus::Parse,
        message: format!("`{name}` is not UTF-8: {e}"),
    })
}

unsafe fn options(opts: *const OprOptions) -> RadiusOptions {
    opts.as_ref().map_or_else(RadiusOptions::default, |o| (*o).into())
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|e| Failure {
        status: OprStatus::InvalidArgument,
        message: e.to_string(),
    })
}

fn boxed_matrix(m: Matrix) -> *mut OprMatrix {
    Box::into_raw(Box::new(OprMatrix(m)))
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Owned by the library; valid until the next call.
#[no_mangle]
pub extern "C" fn opr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn opr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the default grid options.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_options_default(out: *mut OprOptions) -> OprStatus {
    guard(|| write(out, "out", RadiusOptions::default().into()))
}

/// Builds an `n x n` matrix from `2 n²` doubles: row-major entries, each as
/// real part followed by imaginary part.
///
/// # Safety
/// `data` must point to `len` readable doubles and `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn opr_matrix_new(n: usize, data: *const f64, len: usize, out: *mut *mut OprMatrix) -> OprStatus {
    guard(|| {
        if data.is_null() {
            return Err(Failure::null("data"));
        }
        let values = std::slice::from_raw_parts(data, len);
        if !len.is_multiple_of(2) {
            return Err(Failure {
                status: OprStatus::InvalidArgument,
                message: format!("expected an even number of doubles, found {len}"),
            });
        }
        let entries = values.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        write(out, "out", boxed_matrix(Matrix::new(n, entries)?))
    })
}

/// Parses a matrix from its JSON file format.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_matrix_from_json(json: *const c_char, out: *mut *mut OprMatrix) -> OprStatus {
    guard(|| {
        let m = Matrix::from_json_str(read_str(json, "json")?)?;
        write(out, "out", boxed_matrix(m))
    })
}

/// Serializes a matrix to JSON. Free the result with [`opr_string_free`].
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_matrix_to_json(m: *const OprMatrix, out: *mut *mut c_char) -> OprStatus {
    guard(|| {
        let m = deref(m, "m")?;
        write(out, "out", into_c_string(m.0.to_json_string())?)
    })
}

/// Writes the dimension of `m`.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_matrix_dim(m: *const OprMatrix, out: *mut usize) -> OprStatus {
    guard(|| write(out, "out", deref(m, "m")?.0.dim()))
}

/// Copies the entries of `m` into `data` in the layout of
/// [`opr_matrix_new`]. `len` must be at least `2 n²`.
///
/// # Safety
/// `m` must be a live handle and `data` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn opr_matrix_entries(m: *const OprMatrix, data: *mut f64, len: usize) -> OprStatus {
    guard(|| {
        let m = &deref(m, "m")?.0;
        let needed = 2 * m.dim() * m.dim();
        if data.is_null() {
            return Err(Failure::null("data"));
        }
        if len < needed {
            return Err(Failure {
                status: OprStatus::InvalidArgument,
                message: format!("buffer holds {len} doubles, need {needed}"),
            });
        }
        let dst = std::slice::from_raw_parts_mut(data, needed);
        for (pair, z) in dst.chunks_exact_mut(2).zip(m.as_slice()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn opr_matrix_free(m: *mut OprMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Parses a norm selector: `op`, `hs`, `trace`, `schatten:<p>` or `wnum`.
///
/// # Safety
/// `selector` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_norm_parse(selector: *const c_char, out: *mut *mut OprNorm) -> OprStatus {
    guard(|| {
        let norm: NormDescriptor = read_str(selector, "selector")?.parse()?;
        write(out, "out", Box::into_raw(Box::new(OprNorm(norm))))
    })
}

/// Releases a norm. Null is ignored.
///
/// # Safety
/// `norm` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn opr_norm_free(norm: *mut OprNorm) {
    if !norm.is_null() {
        drop(Box::from_raw(norm));
    }
}

/// `N(m)`.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_norm_evaluate(norm: *const OprNorm, m: *const OprMatrix, out: *mut f64) -> OprStatus {
    guard(|| {
        let value = deref(norm, "norm")?.0.evaluate(&deref(m, "m")?.0)?;
        write(out, "out", value)
    })
}

/// Generalized numerical radius `w_N(t)`. `opts` may be null for defaults.
///
/// # Safety
/// Handles must be live, `opts` null or readable, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_w_n(
    t: *const OprMatrix,
    norm: *const OprNorm,
    opts: *const OprOptions,
    out: *mut OprRadius,
) -> OprStatus {
    guard(|| {
        let r = radius::w_n(&deref(t, "t")?.0, &deref(norm, "norm")?.0, &options(opts))?;
        write(out, "out", r.into())
    })
}

/// Generalized Euclidean operator radius `w_(N,e)(b, c)`.
///
/// # Safety
/// Handles must be live, `opts` null or readable, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_w_ne(
    b: *const OprMatrix,
    c: *const OprMatrix,
    norm: *const OprNorm,
    opts: *const OprOptions,
    out: *mut OprRadius,
) -> OprStatus {
    guard(|| {
        let r = radius::w_ne(&deref(b, "b")?.0, &deref(c, "c")?.0, &deref(norm, "norm")?.0, &options(opts))?;
        write(out, "out", r.into())
    })
}

/// `w_(N,e)(b, c)` through the real-coefficient evaluation path.
///
/// # Safety
/// Handles must be live, `opts` null or readable, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_w_ne_alpha_beta(
    b: *const OprMatrix,
    c: *const OprMatrix,
    norm: *const OprNorm,
    opts: *const OprOptions,
    out: *mut OprRadius,
) -> OprStatus {
    guard(|| {
        let r = radius::w_ne_alpha_beta(&deref(b, "b")?.0, &deref(c, "c")?.0, &deref(norm, "norm")?.0, &options(opts))?;
        write(out, "out", r.into())
    })
}

/// Hilbert-Schmidt numerical radius of `t` in closed form.
///
/// # Safety
/// `t` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_w2_closed_form(t: *const OprMatrix, out: *mut f64) -> OprStatus {
    guard(|| write(out, "out", radius::w2_closed_form(&deref(t, "t")?.0)))
}

/// Hilbert-Schmidt Euclidean operator radius over the reduced `(t, φ)` grid.
///
/// # Safety
/// Handles must be live, `opts` null or readable, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_w2e_reduced(
    b: *const OprMatrix,
    c: *const OprMatrix,
    opts: *const OprOptions,
    out: *mut OprRadius,
) -> OprStatus {
    guard(|| {
        let r = radius::w2e_reduced(&deref(b, "b")?.0, &deref(c, "c")?.0, &options(opts))?;
        write(out, "out", r.into())
    })
}

/// Lower estimate of the vector-based Euclidean operator radius.
///
/// # Safety
/// Handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_vector_oracle(
    b: *const OprMatrix,
    c: *const OprMatrix,
    samples: usize,
    seed: u64,
    polish_iters: usize,
    out: *mut f64,
) -> OprStatus {
    guard(|| {
        let v = radius::w_e_vector_oracle(&deref(b, "b")?.0, &deref(c, "c")?.0, samples, seed, polish_iters)?;
        write(out, "out", v)
    })
}

/// Runs every registered check on `(b, c)` for each of `count` norms and
/// writes the verdicts as a JSON array. Free the result with
/// [`opr_string_free`].
///
/// # Safety
/// Handles must be live, `norms` must point to `count` live norm handles,
/// `opts` null or readable, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_run_suite_json(
    b: *const OprMatrix,
    c: *const OprMatrix,
    norms: *const *const OprNorm,
    count: usize,
    opts: *const OprOptions,
    out: *mut *mut c_char,
) -> OprStatus {
    guard(|| {
        if norms.is_null() {
            return Err(Failure::null("norms"));
        }
        let list = std::slice::from_raw_parts(norms, count)
            .iter()
            .map(|&p| deref(p, "norms[i]").map(|n| n.0))
            .collect::<Result<Vec<_>, _>>()?;
        let verdicts = run_suite(&deref(b, "b")?.0, &deref(c, "c")?.0, &list, &options(opts))?;
        let json = serde_json::to_string(&verdicts).map_err(Error::from)?;
        write(out, "out", into_c_string(json)?)
    })
}

/// Draws a seeded sample from a family selector `name[:n]`. `out_b` receives
/// the first matrix. `out_c` may be null; otherwise it receives the second
/// matrix of the pair (`T*` for `nilpotent-pairs`, an independent draw for
/// the other families).
///
/// # Safety
/// `family` must be a NUL-terminated string, `out_b` valid for writes and
/// `out_c` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn opr_sample(
    family: *const c_char,
    seed: u64,
    out_b: *mut *mut OprMatrix,
    out_c: *mut *mut OprMatrix,
) -> OprStatus {
    guard(|| {
        if out_b.is_null() {
            return Err(Failure::null("out_b"));
        }
        let spec = SamplerSpec::from_selector(read_str(family, "family")?, seed)?;
        if out_c.is_null() {
            write(out_b, "out_b", boxed_matrix(sampling::sample_matrix(&spec)?))
        } else {
            let (b, c) = sampling::sample_pair(&spec)?;
            write(out_b, "out_b", boxed_matrix(b))?;
            write(out_c, "out_c", boxed_matrix(c))
        }
    })
}
