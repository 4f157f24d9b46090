//! C ABI over the network analysis library: opaque netlist handles,
//! status-code error reporting, and caller-allocated output buffers.
//!
//! Conventions:
//! - Every fallible function returns an [`RnStatus`]; outputs are written
//!   through pointers only on `RN_STATUS_OK`.
//! - A failure stores a message retrievable with
//!   [`rn_last_error_message`]; the pointer stays valid until the next
//!   call on the same thread.
//! - Handles from [`rn_netlist_parse`] must be released with
//!   [`rn_netlist_free`].

use resonet::extract::ResonanceFit;
use resonet::netlist::{parse_netlist, Netlist};
use resonet::{distributed, solver, Error, ErrorClass};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Outcome of an API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RnStatus {
    /// Success.
    Ok = 0,
    /// Input text could not be read or parsed.
    Parse = 1,
    /// A numerical procedure failed (singularity, poor fit, ...).
    Numeric = 2,
    /// The requested feature (mode, resonance, port) is not present.
    FeatureNotFound = 3,
    /// An argument value is out of range.
    InvalidArgument = 4,
    /// A required pointer argument was null.
    NullPointer = 5,
}

/// Opaque parsed-netlist handle.
pub struct RnNetlist {
    inner: Netlist,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap_or_default());
}

fn clear_error() {
    LAST_ERROR.with(|e| {
        let mut slot = e.borrow_mut();
        if !slot.as_bytes().is_empty() {
            *slot = CString::default();
        }
    });
}

fn fail(err: &Error) -> RnStatus {
    set_error(&err.to_string());
    match err.class() {
        ErrorClass::Parse => RnStatus::Parse,
        ErrorClass::FeatureNotFound => RnStatus::FeatureNotFound,
        ErrorClass::Numeric => match err {
            Error::InvalidArgument { .. } => RnStatus::InvalidArgument,
            _ => RnStatus::Numeric,
        },
    }
}

fn null_pointer(name: &str) -> RnStatus {
    set_error(&format!("null pointer argument: {name}"));
    RnStatus::NullPointer
}

/// Run `f` with panics converted to a `Numeric` status so unwinding never
/// crosses the ABI.
fn guarded(f: impl FnOnce() -> RnStatus) -> RnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            RnStatus::Numeric
        }
    }
}

/// Message for the most recent failure on this thread; empty string after
/// a success. Valid until the next API call on the same thread.
#[no_mangle]
pub extern "C" fn rn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parse a netlist from NUL-terminated text into a new handle.
///
/// # Safety
/// `text` must point to a NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn rn_netlist_parse(
    text: *const c_char,
    out: *mut *mut RnNetlist,
) -> RnStatus {
    guarded(|| {
        if text.is_null() {
            return null_pointer("text");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        let bytes = unsafe { CStr::from_ptr(text) };
        let Ok(s) = bytes.to_str() else {
            set_error("netlist text is not valid UTF-8");
            return RnStatus::InvalidArgument;
        };
        match parse_netlist(s) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(RnNetlist { inner })) };
                clear_error();
                RnStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Release a handle from [`rn_netlist_parse`]. A null handle is a no-op.
///
/// # Safety
/// `net` must be a handle returned by [`rn_netlist_parse`] that has not
/// been freed already, or null.
#[no_mangle]
pub unsafe extern "C" fn rn_netlist_free(net: *mut RnNetlist) {
    if !net.is_null() {
        drop(unsafe { Box::from_raw(net) });
    }
}

/// Number of ports declared in the netlist.
///
/// # Safety
/// `net` must be a live handle; `out` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn rn_netlist_port_count(net: *const RnNetlist, out: *mut usize) -> RnStatus {
    guarded(|| {
        if net.is_null() {
            return null_pointer("net");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        unsafe { *out = (*net).inner.port_count() };
        clear_error();
        RnStatus::Ok
    })
}

/// Sweep one scattering coefficient S(row, col) over a linear frequency
/// grid. `row` and `col` are 1-based port numbers. The three output arrays
/// must hold `points` elements; samples where the network is singular are
/// reported as NaN in `out_re`/`out_im`.
///
/// # Safety
/// `net` must be a live handle; the output arrays must each be valid for
/// `points` writes.
#[no_mangle]
pub unsafe extern "C" fn rn_sweep_pair(
    net: *const RnNetlist,
    row: usize,
    col: usize,
    fmin_hz: f64,
    fmax_hz: f64,
    points: usize,
    out_freq_hz: *mut f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RnStatus {
    guarded(|| {
        if net.is_null() {
            return null_pointer("net");
        }
        if out_freq_hz.is_null() || out_re.is_null() || out_im.is_null() {
            return null_pointer("output array");
        }
        let netlist = unsafe { &(*net).inner };
        let n_ports = netlist.port_count();
        if row == 0 || col == 0 || row > n_ports || col > n_ports {
            set_error(&format!(
                "port pair ({row}, {col}) out of range for a {n_ports}-port network"
            ));
            return RnStatus::InvalidArgument;
        }
        let grid = match solver::frequency_grid(fmin_hz, fmax_hz, points) {
            Ok(g) => g,
            Err(e) => return fail(&e),
        };
        let swept = match solver::sweep(netlist, &grid) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        let freqs = unsafe { std::slice::from_raw_parts_mut(out_freq_hz, points) };
        let res = unsafe { std::slice::from_raw_parts_mut(out_re, points) };
        let ims = unsafe { std::slice::from_raw_parts_mut(out_im, points) };
        let kept = swept.freqs_hz();
        let mut k = 0;
        for (i, &f) in grid.iter().enumerate() {
            freqs[i] = f;
            if k < kept.len() && kept[k] == f {
                let s = swept.s_matrix(k).at(row - 1, col - 1);
                res[i] = s.re;
                ims[i] = s.im;
                k += 1;
            } else {
                res[i] = f64::NAN;
                ims[i] = f64::NAN;
            }
        }
        clear_error();
        RnStatus::Ok
    })
}

/// Find resonant modes of the loaded network in a frequency window.
/// Up to `cap` modes are written to the output arrays (resonant frequency
/// in Hz and decay rate as kappa/2pi in Hz); `out_count` receives the
/// total number found, which may exceed `cap`.
///
/// # Safety
/// `net` must be a live handle; `out_f_r_hz` and `out_kappa_over_2pi_hz`
/// must be valid for `cap` writes (may be null when `cap` is 0);
/// `out_count` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn rn_find_modes(
    net: *const RnNetlist,
    fmin_hz: f64,
    fmax_hz: f64,
    out_f_r_hz: *mut f64,
    out_kappa_over_2pi_hz: *mut f64,
    cap: usize,
    out_count: *mut usize,
) -> RnStatus {
    guarded(|| {
        if net.is_null() {
            return null_pointer("net");
        }
        if out_count.is_null() {
            return null_pointer("out_count");
        }
        if cap > 0 && (out_f_r_hz.is_null() || out_kappa_over_2pi_hz.is_null()) {
            return null_pointer("output array");
        }
        let modes = match solver::find_modes(unsafe { &(*net).inner }, (fmin_hz, fmax_hz)) {
            Ok(m) => m,
            Err(e) => return fail(&e),
        };
        unsafe { *out_count = modes.len() };
        for (i, mode) in modes.iter().take(cap).enumerate() {
            unsafe {
                *out_f_r_hz.add(i) = mode.f_r_hz();
                *out_kappa_over_2pi_hz.add(i) = mode.kappa_over_2pi_hz();
            }
        }
        clear_error();
        RnStatus::Ok
    })
}

fn write_fit(
    fit: &ResonanceFit,
    out_f0_hz: *mut f64,
    out_kappa_over_2pi_hz: *mut f64,
    out_residual: *mut f64,
) {
    let two_pi = 2.0 * std::f64::consts::PI;
    unsafe {
        *out_f0_hz = fit.omega0 / two_pi;
        *out_kappa_over_2pi_hz = fit.kappa / two_pi;
        *out_residual = fit.residual;
    }
}

/// Fit the decay rate of the resonance seen in reflection at the named
/// port, from a line-shape fit over `span_hz` centered on `f_center_hz`.
///
/// # Safety
/// `net` must be a live handle; `port_name` must be NUL-terminated; the
/// three outputs must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn rn_ringdown_kappa(
    net: *const RnNetlist,
    port_name: *const c_char,
    f_center_hz: f64,
    span_hz: f64,
    out_f0_hz: *mut f64,
    out_kappa_over_2pi_hz: *mut f64,
    out_residual: *mut f64,
) -> RnStatus {
    guarded(|| {
        if net.is_null() {
            return null_pointer("net");
        }
        if port_name.is_null() {
            return null_pointer("port_name");
        }
        if out_f0_hz.is_null() || out_kappa_over_2pi_hz.is_null() || out_residual.is_null() {
            return null_pointer("output");
        }
        let Ok(port) = unsafe { CStr::from_ptr(port_name) }.to_str() else {
            set_error("port name is not valid UTF-8");
            return RnStatus::InvalidArgument;
        };
        match solver::ringdown(unsafe { &(*net).inner }, port, f_center_hz, span_hz) {
            Ok(fit) => {
                write_fit(&fit, out_f0_hz, out_kappa_over_2pi_hz, out_residual);
                clear_error();
                RnStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Decay rate (rad/s) of a transmissively probed resonator from its
/// coupler transmission magnitude at resonance.
///
/// # Safety
/// `out_kappa_rad_per_s` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn rn_kappa_transmissive(
    s21_mag: f64,
    f0_hz: f64,
    out_kappa_rad_per_s: *mut f64,
) -> RnStatus {
    guarded(|| {
        if out_kappa_rad_per_s.is_null() {
            return null_pointer("out_kappa_rad_per_s");
        }
        match distributed::kappa_transmissive(s21_mag, f0_hz) {
            Ok(kappa) => {
                unsafe { *out_kappa_rad_per_s = kappa };
                clear_error();
                RnStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Decay rate (rad/s) of a reflectively probed resonator (twice the
/// transmissive rate for the same coupler).
///
/// # Safety
/// `out_kappa_rad_per_s` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn rn_kappa_reflective(
    s21_mag: f64,
    f0_hz: f64,
    out_kappa_rad_per_s: *mut f64,
) -> RnStatus {
    guarded(|| {
        if out_kappa_rad_per_s.is_null() {
            return null_pointer("out_kappa_rad_per_s");
        }
        match distributed::kappa_reflective(s21_mag, f0_hz) {
            Ok(kappa) => {
                unsafe { *out_kappa_rad_per_s = kappa };
                clear_error();
                RnStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Line-to-line coupling coefficient of an ideal backward coupler with
/// voltage coupling `zeta` at modal electrical angle `theta` (radians):
/// the complex S21 of the 4-port.
///
/// # Safety
/// `out_re` and `out_im` must be valid to write.
#[no_mangle]
pub unsafe extern "C" fn rn_backward_coupler_s21(
    zeta: f64,
    theta: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RnStatus {
    guarded(|| {
        if out_re.is_null() || out_im.is_null() {
            return null_pointer("output");
        }
        match resonet::coupled_lines::backward_coupler_smatrix(zeta, theta) {
            Ok(s) => {
                let s21 = s.at(0, 1);
                unsafe {
                    *out_re = s21.re;
                    *out_im = s21.im;
                }
                clear_error();
                RnStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
