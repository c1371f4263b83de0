//! C ABI over `toda-core`.
//!
//! Every fallible call returns a [`TodaStatus`]; on failure the message is
//! kept per thread and read with [`toda_last_error_message`]. Handles are
//! opaque and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use toda_core::dynamics::evolve;
use toda_core::lax::{build_monodromy, conserved_poly, PhasePoint};
use toda_core::matrix::{matrix_element, norm};
use toda_core::poly::{MPoly, RPoly};
use toda_core::quantum::{baxter_residual, bs_quantize, solve_states, QFunction};
use toda_core::spectral::{build_spectral, period_matrix, PeriodData, SpectralData};
use toda_core::TodaError;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TodaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Numerical = 3,
    BufferTooSmall = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// Spectral curve with its period data.
pub struct TodaCurve {
    spectral: SpectralData,
    periods: PeriodData,
}

/// Lowest levels of the two-site chain at one `ħ`.
pub struct TodaSpectrum {
    states: Vec<QFunction>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: TodaStatus, msg: impl Into<String>) -> TodaStatus {
    set_error(msg.into());
    status
}

fn from_core(e: TodaError) -> TodaStatus {
    let status = match e {
        TodaError::InvalidInput(_) | TodaError::NotSymmetric | TodaError::DegenerateCurve(..) => TodaStatus::InvalidInput,
        _ => TodaStatus::Numerical,
    };
    fail(status, e.to_string())
}

/// Run `f`, converting panics into [`TodaStatus::Panic`].
fn guard(f: impl FnOnce() -> TodaStatus) -> TodaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(TodaStatus::Panic, format!("panic: {msg}"))
        }
    }
}

/// # Safety
/// `p` is null or points to `len` readable doubles.
unsafe fn slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], TodaStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(TodaStatus::NullPointer, "null input array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Copy `v` to `out` (capacity `cap`) and store its length in `len`.
///
/// # Safety
/// `out` is null or writable for `cap` doubles; `len` is writable.
unsafe fn write_out(v: &[f64], out: *mut f64, cap: usize, len: *mut usize) -> TodaStatus {
    if len.is_null() {
        return fail(TodaStatus::NullPointer, "null length pointer");
    }
    *len = v.len();
    if v.len() > cap {
        return fail(TodaStatus::BufferTooSmall, format!("need {} doubles, have {cap}", v.len()));
    }
    if !v.is_empty() {
        if out.is_null() {
            return fail(TodaStatus::NullPointer, "null output array");
        }
        ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
    }
    TodaStatus::Ok
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(TodaStatus::NullPointer, concat!("null pointer: ", stringify!($p)));
        })+
    };
}

macro_rules! try_in {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! try_core {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return from_core(e),
        }
    };
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn toda_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn toda_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn toda_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build the curve of the monic `t(λ)` with coefficients `t[0..len]`,
/// constant term first.
///
/// # Safety
/// `t` points to `len` doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn toda_curve_new(t: *const f64, len: usize, out: *mut *mut TodaCurve) -> TodaStatus {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let t = try_in!(slice(t, len));
        let spectral = try_core!(build_spectral(&RPoly::new(t.to_vec())));
        let periods = try_core!(period_matrix(&spectral));
        *out = Box::into_raw(Box::new(TodaCurve { spectral, periods }));
        TodaStatus::Ok
    })
}

/// # Safety
/// `curve` is null or came from [`toda_curve_new`] and was not freed.
#[no_mangle]
pub unsafe extern "C" fn toda_curve_free(curve: *mut TodaCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// # Safety
/// `curve` is a live handle; `genus` is writable.
#[no_mangle]
pub unsafe extern "C" fn toda_curve_genus(curve: *const TodaCurve, genus: *mut usize) -> TodaStatus {
    non_null!(curve, genus);
    *genus = (*curve).spectral.genus;
    TodaStatus::Ok
}

/// Branch points in ascending order.
///
/// # Safety
/// `curve` is a live handle; `out` holds `cap` doubles; `len` is writable.
#[no_mangle]
pub unsafe extern "C" fn toda_curve_branch_points(
    curve: *const TodaCurve,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> TodaStatus {
    non_null!(curve);
    write_out(&(*curve).spectral.branch, out, cap, len)
}

/// Actions of the `g` cycles.
///
/// # Safety
/// As for [`toda_curve_branch_points`].
#[no_mangle]
pub unsafe extern "C" fn toda_curve_actions(
    curve: *const TodaCurve,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> TodaStatus {
    non_null!(curve);
    write_out(&(*curve).periods.actions, out, cap, len)
}

/// Coefficient matrix of the normalized differentials, `g × g` row major.
///
/// # Safety
/// As for [`toda_curve_branch_points`].
#[no_mangle]
pub unsafe extern "C" fn toda_curve_frequency_matrix(
    curve: *const TodaCurve,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> TodaStatus {
    non_null!(curve);
    let flat: Vec<f64> = (*curve).periods.a.iter().flatten().copied().collect();
    write_out(&flat, out, cap, len)
}

/// Coefficients of `t(λ)` at the phase point `(p, q)` of `n` sites,
/// constant term first (`n + 1` values).
///
/// # Safety
/// `p`, `q` hold `n` doubles; `out` holds `cap`; `len` is writable.
#[no_mangle]
pub unsafe extern "C" fn toda_conserved_poly(
    p: *const f64,
    q: *const f64,
    n: usize,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> TodaStatus {
    guard(|| {
        let x = try_core!(PhasePoint::new(try_in!(slice(p, n)).to_vec(), try_in!(slice(q, n)).to_vec()));
        let t = conserved_poly(&build_monodromy(&x));
        let mut c = t.coeffs().to_vec();
        c.resize(n + 1, 0.0);
        write_out(&c, out, cap, len)
    })
}

/// Advance `(p, q)` in place along flow `flow` for time `tau`.
///
/// # Safety
/// `p`, `q` hold `n` readable and writable doubles.
#[no_mangle]
pub unsafe extern "C" fn toda_evolve(
    p: *mut f64,
    q: *mut f64,
    n: usize,
    flow: usize,
    tau: f64,
    tol: f64,
) -> TodaStatus {
    guard(|| {
        non_null!(p, q);
        let x = try_core!(PhasePoint::new(try_in!(slice(p, n)).to_vec(), try_in!(slice(q, n)).to_vec()));
        let y = try_core!(evolve(&x, flow, tau, tol));
        ptr::copy_nonoverlapping(y.p.as_ptr(), p, n);
        ptr::copy_nonoverlapping(y.q.as_ptr(), q, n);
        TodaStatus::Ok
    })
}

/// Bohr–Sommerfeld energy of the two-site level `nj`.
///
/// # Safety
/// `energy` is writable.
#[no_mangle]
pub unsafe extern "C" fn toda_bs_energy(hbar: f64, nj: usize, energy: *mut f64) -> TodaStatus {
    guard(|| {
        non_null!(energy);
        *energy = try_core!(bs_quantize(hbar, nj)).energy;
        TodaStatus::Ok
    })
}

/// Solve the lowest `levels` two-site states.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn toda_spectrum_solve(hbar: f64, levels: usize, out: *mut *mut TodaSpectrum) -> TodaStatus {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let states = try_core!(solve_states(hbar, levels));
        *out = Box::into_raw(Box::new(TodaSpectrum { states }));
        TodaStatus::Ok
    })
}

/// # Safety
/// `spectrum` is null or came from [`toda_spectrum_solve`] and was not freed.
#[no_mangle]
pub unsafe extern "C" fn toda_spectrum_free(spectrum: *mut TodaSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

unsafe fn state<'a>(spectrum: *const TodaSpectrum, level: usize) -> Result<&'a QFunction, TodaStatus> {
    if spectrum.is_null() {
        return Err(fail(TodaStatus::NullPointer, "null spectrum"));
    }
    let s = &*spectrum;
    s.states
        .get(level)
        .ok_or_else(|| fail(TodaStatus::OutOfRange, format!("level {level} of {}", s.states.len())))
}

/// # Safety
/// `spectrum` is a live handle; `len` is writable.
#[no_mangle]
pub unsafe extern "C" fn toda_spectrum_len(spectrum: *const TodaSpectrum, len: *mut usize) -> TodaStatus {
    non_null!(spectrum, len);
    *len = (*spectrum).states.len();
    TodaStatus::Ok
}

/// Energy and `t₂` of one level.
///
/// # Safety
/// `spectrum` is a live handle; `energy` and `t2` are writable.
#[no_mangle]
pub unsafe extern "C" fn toda_spectrum_level(
    spectrum: *const TodaSpectrum,
    level: usize,
    energy: *mut f64,
    t2: *mut f64,
) -> TodaStatus {
    non_null!(energy, t2);
    let q = try_in!(state(spectrum, level));
    *energy = q.energy;
    *t2 = q.t.coeff(0);
    TodaStatus::Ok
}

/// `Q(γ)` of one level at complex `γ`.
///
/// # Safety
/// `spectrum` is a live handle; `re_out`, `im_out` are writable.
#[no_mangle]
pub unsafe extern "C" fn toda_spectrum_q(
    spectrum: *const TodaSpectrum,
    level: usize,
    re: f64,
    im: f64,
    re_out: *mut f64,
    im_out: *mut f64,
) -> TodaStatus {
    guard(|| {
        non_null!(re_out, im_out);
        let q = try_in!(state(spectrum, level));
        let v = try_core!(q.q(Complex64::new(re, im)));
        *re_out = v.re;
        *im_out = v.im;
        TodaStatus::Ok
    })
}

/// Baxter equation residual of one level.
///
/// # Safety
/// `spectrum` is a live handle; `residual` is writable.
#[no_mangle]
pub unsafe extern "C" fn toda_spectrum_baxter_residual(
    spectrum: *const TodaSpectrum,
    level: usize,
    residual: *mut f64,
) -> TodaStatus {
    guard(|| {
        non_null!(residual);
        let q = try_in!(state(spectrum, level));
        *residual = try_core!(baxter_residual(q));
        TodaStatus::Ok
    })
}

/// `⟨m|F|m′⟩ / √(⟨m|m⟩⟨m′|m′⟩)` for `F(γ) = Σ f[i] γ^i`.
///
/// # Safety
/// `spectrum` is a live handle; `f` holds `len` doubles; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn toda_spectrum_matrix_element(
    spectrum: *const TodaSpectrum,
    m: usize,
    mp: usize,
    f: *const f64,
    len: usize,
    re_out: *mut f64,
    im_out: *mut f64,
) -> TodaStatus {
    guard(|| {
        non_null!(re_out, im_out);
        let (a, b) = (try_in!(state(spectrum, m)), try_in!(state(spectrum, mp)));
        let mut fm = MPoly::zero(1);
        for (i, c) in try_in!(slice(f, len)).iter().enumerate() {
            fm.add_term(vec![i as u32], *c);
        }
        let v = try_core!(matrix_element(a, b, &fm)).value();
        let nn = (try_core!(norm(a)) * try_core!(norm(b))).sqrt();
        *re_out = v.re / nn;
        *im_out = v.im / nn;
        TodaStatus::Ok
    })
}
