//! Exercises the C ABI end to end from Rust: handle lifecycle, sweep and
//! mode extraction on real circuits, and every error path.

use resonet_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    unsafe { CStr::from_ptr(rn_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn parse(text: &str) -> *mut RnNetlist {
    let c = CString::new(text).unwrap();
    let mut handle: *mut RnNetlist = ptr::null_mut();
    let status = unsafe { rn_netlist_parse(c.as_ptr(), &mut handle) };
    assert_eq!(status, RnStatus::Ok, "parse failed: {}", last_error());
    assert!(!handle.is_null());
    handle
}

const SERIES_R: &str = "\
PORT p1 a 0 Z0=50
RES r1 a b R=50
PORT p2 b 0 Z0=50
";

const LUMPED_RESONATOR: &str = "\
PORT p1 n1 0 Z0=50
CAP cc n1 n2 C=8e-15
IND l1 n2 0 L=1e-9
CAP c1 n2 0 C=1.0132118364233778e-12
";

#[test]
fn version_is_nonempty() {
    let v = unsafe { CStr::from_ptr(rn_version()) }.to_str().unwrap();
    assert!(!v.is_empty());
    assert!(v.split('.').count() >= 2);
}

#[test]
fn parse_sweep_free_roundtrip() {
    let net = parse(SERIES_R);

    let mut ports = 0usize;
    assert_eq!(
        unsafe { rn_netlist_port_count(net, &mut ports) },
        RnStatus::Ok
    );
    assert_eq!(ports, 2);

    let n = 5usize;
    let mut freqs = vec![0.0; n];
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    let status = unsafe {
        rn_sweep_pair(
            net,
            2,
            1,
            1e9,
            2e9,
            n,
            freqs.as_mut_ptr(),
            re.as_mut_ptr(),
            im.as_mut_ptr(),
        )
    };
    assert_eq!(status, RnStatus::Ok);
    assert_eq!(freqs[0], 1e9);
    assert_eq!(freqs[n - 1], 2e9);
    for i in 0..n {
        // 50-ohm series resistor between 50-ohm ports: S21 = 2/3.
        assert!((re[i] - 2.0 / 3.0).abs() < 1e-12);
        assert!(im[i].abs() < 1e-15);
    }
    assert_eq!(last_error(), "");

    unsafe { rn_netlist_free(net) };
}

#[test]
fn modes_and_ringdown_agree() {
    let net = parse(LUMPED_RESONATOR);

    let mut f_r = [0.0; 4];
    let mut kappa = [0.0; 4];
    let mut count = 0usize;
    let status = unsafe {
        rn_find_modes(
            net,
            4.8e9,
            5.1e9,
            f_r.as_mut_ptr(),
            kappa.as_mut_ptr(),
            4,
            &mut count,
        )
    };
    assert_eq!(status, RnStatus::Ok, "{}", last_error());
    assert_eq!(count, 1);
    assert!((4.9e9..5.1e9).contains(&f_r[0]), "f_r = {}", f_r[0]);
    assert!(kappa[0] > 0.0);

    let port = CString::new("p1").unwrap();
    let (mut f0, mut k_fit, mut residual) = (0.0, 0.0, 0.0);
    let span = (40.0 * kappa[0]).min(20e6);
    let status = unsafe {
        rn_ringdown_kappa(
            net,
            port.as_ptr(),
            f_r[0],
            span,
            &mut f0,
            &mut k_fit,
            &mut residual,
        )
    };
    assert_eq!(status, RnStatus::Ok, "{}", last_error());
    assert!(
        (k_fit / kappa[0] - 1.0).abs() < 0.01,
        "fit {k_fit} vs mode {}",
        kappa[0]
    );
    assert!((f0 / f_r[0] - 1.0).abs() < 1e-4);
    assert!(residual < 1e-2);

    // cap = 0 queries the count without writing.
    let mut count_only = 0usize;
    let status = unsafe {
        rn_find_modes(
            net,
            4.8e9,
            5.1e9,
            ptr::null_mut(),
            ptr::null_mut(),
            0,
            &mut count_only,
        )
    };
    assert_eq!(status, RnStatus::Ok);
    assert_eq!(count_only, 1);

    unsafe { rn_netlist_free(net) };
}

#[test]
fn closed_form_helpers_match_library_ratio() {
    let mut k_t = 0.0;
    let mut k_r = 0.0;
    assert_eq!(
        unsafe { rn_kappa_transmissive(0.006, 5e9, &mut k_t) },
        RnStatus::Ok
    );
    assert_eq!(
        unsafe { rn_kappa_reflective(0.006, 5e9, &mut k_r) },
        RnStatus::Ok
    );
    assert!(k_t > 0.0);
    assert!((k_r / k_t - 2.0).abs() < 1e-12);

    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { rn_backward_coupler_s21(0.3, std::f64::consts::FRAC_PI_2, &mut re, &mut im) },
        RnStatus::Ok
    );
    // At a quarter-wave angle the coupled output is zeta (real); the
    // through path carries the quadrature factor.
    assert!((re - 0.3).abs() < 1e-12);
    assert!(im.abs() < 1e-15);
}

#[test]
fn error_paths_set_status_and_message() {
    // Parse failure with a message naming the line.
    let bad = CString::new("PORT p1 a 0 Z0=50\nRES r1 a b R=oops\n").unwrap();
    let mut handle: *mut RnNetlist = ptr::null_mut();
    let status = unsafe { rn_netlist_parse(bad.as_ptr(), &mut handle) };
    assert_eq!(status, RnStatus::Parse);
    assert!(handle.is_null());
    assert!(last_error().contains("line 2"), "message: {}", last_error());

    // Null pointers.
    let status = unsafe { rn_netlist_parse(ptr::null(), &mut handle) };
    assert_eq!(status, RnStatus::NullPointer);
    let mut ports = 0usize;
    assert_eq!(
        unsafe { rn_netlist_port_count(ptr::null(), &mut ports) },
        RnStatus::NullPointer
    );

    let net = parse(SERIES_R);

    // Port pair out of range.
    let mut buf = vec![0.0; 3];
    let status = unsafe {
        rn_sweep_pair(
            net,
            3,
            1,
            1e9,
            2e9,
            3,
            buf.as_mut_ptr(),
            buf.as_mut_ptr(),
            buf.as_mut_ptr(),
        )
    };
    assert_eq!(status, RnStatus::InvalidArgument);
    assert!(last_error().contains("out of range"));

    // Bad frequency window.
    let status = unsafe {
        rn_sweep_pair(
            net,
            1,
            1,
            2e9,
            1e9,
            3,
            buf.as_mut_ptr(),
            buf.as_mut_ptr(),
            buf.as_mut_ptr(),
        )
    };
    assert_eq!(status, RnStatus::InvalidArgument);

    // No mode in window.
    let mut count = 0usize;
    let status = unsafe {
        rn_find_modes(
            net,
            1e9,
            1.1e9,
            ptr::null_mut(),
            ptr::null_mut(),
            0,
            &mut count,
        )
    };
    assert_eq!(status, RnStatus::FeatureNotFound);
    assert!(!last_error().is_empty());

    // Unknown port name.
    let port = CString::new("nope").unwrap();
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    let status = unsafe { rn_ringdown_kappa(net, port.as_ptr(), 5e9, 1e6, &mut a, &mut b, &mut c) };
    assert_ne!(status, RnStatus::Ok);
    assert!(!last_error().is_empty());

    // Coupling out of range.
    let (mut re, mut im) = (0.0, 0.0);
    let status = unsafe { rn_backward_coupler_s21(1.5, 0.5, &mut re, &mut im) };
    assert_ne!(status, RnStatus::Ok);

    // A success clears the message.
    assert_eq!(
        unsafe { rn_netlist_port_count(net, &mut ports) },
        RnStatus::Ok
    );
    assert_eq!(last_error(), "");

    unsafe { rn_netlist_free(net) };
    unsafe { rn_netlist_free(ptr::null_mut()) };
}

#[test]
fn singular_samples_become_nan() {
    // Half-wave line referenced to 2.5 GHz: singular at 2.5 and 5 GHz.
    let net = parse(
        "PORT p1 a 0 Z0=50\nTLINE t1 a b Z0=50 EL=180 F0=2.5e9\nSHORTSTUB s1 b Z0=50 EL=90 F0=2.5e9\n",
    );
    let n = 3usize;
    let mut freqs = vec![0.0; n];
    let mut re = vec![0.0; n];
    let mut im = vec![0.0; n];
    let status = unsafe {
        rn_sweep_pair(
            net,
            1,
            1,
            2.5e9,
            5e9,
            n,
            freqs.as_mut_ptr(),
            re.as_mut_ptr(),
            im.as_mut_ptr(),
        )
    };
    assert_eq!(status, RnStatus::Ok, "{}", last_error());
    // Grid 2.5 / 3.75 / 5 GHz: the endpoints hit the singularity, the
    // middle survives as a lossless reflection.
    assert!(re[0].is_nan() && im[0].is_nan());
    assert!(re[2].is_nan() && im[2].is_nan());
    let mag = (re[1] * re[1] + im[1] * im[1]).sqrt();
    assert!((mag - 1.0).abs() < 1e-8, "|S11| = {mag}");
    unsafe { rn_netlist_free(net) };
}
