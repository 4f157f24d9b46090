//! End-to-end checks of the command-line binary: output format, numeric
//! content, determinism, and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_resonet")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}\n{}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_netlist(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const SERIES_R: &str = "\
PORT p1 a 0 Z0=50
RES r1 a b R=50
PORT p2 b 0 Z0=50
";

const REFLECTIVE: &str = "\
PORT p1 feed_in 0 Z0=50
CLINE bc feed_in res_short feed_stub res_open ZE=70 ZO=35.714285714285715 EL=1 F0=5e9
SHORTSTUB st_short res_short Z0=50 EL=45 F0=5e9
OPENSTUB st_feed feed_stub Z0=50 EL=135 F0=5e9
OPENSTUB st_open res_open Z0=50 EL=44 F0=5e9
";

#[test]
fn sweep_series_resistor_csv() {
    let dir = tempdir();
    let net = write_netlist(&dir, "series.net", SERIES_R);
    let args = [
        "sweep",
        "--netlist",
        net.to_str().unwrap(),
        "--fmin",
        "1e9",
        "--fmax",
        "2e9",
        "--points",
        "3",
        "--pairs",
        "11,21",
    ];
    let text = stdout(&run(&args));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "freq_hz,re_S11,im_S11,re_S21,im_S21");
    for (i, row) in lines[1..].iter().enumerate() {
        let vals: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(vals.len(), 5);
        let f_expect = [1e9, 1.5e9, 2e9][i];
        assert_eq!(vals[0], f_expect);
        // 50-ohm series resistor between 50-ohm ports: S11 = 1/3, S21 = 2/3.
        assert!((vals[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!(vals[2].abs() < 1e-15);
        assert!((vals[3] - 2.0 / 3.0).abs() < 1e-12);
        assert!(vals[4].abs() < 1e-15);
    }
    // Deterministic byte-for-byte.
    assert_eq!(text, stdout(&run(&args)));
}

#[test]
fn sweep_writes_output_file() {
    let dir = tempdir();
    let net = write_netlist(&dir, "series.net", SERIES_R);
    let out_path = dir.join("sweep.csv");
    let to_file = run(&[
        "sweep",
        "--netlist",
        net.to_str().unwrap(),
        "--fmin",
        "1e9",
        "--fmax",
        "2e9",
        "--points",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    let on_stdout = stdout(&run(&[
        "sweep",
        "--netlist",
        net.to_str().unwrap(),
        "--fmin",
        "1e9",
        "--fmax",
        "2e9",
        "--points",
        "3",
    ]));
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), on_stdout);
    // No leftover temporary files from the atomic write.
    let stray: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.contains("tmp"))
        .collect();
    assert!(stray.is_empty(), "stray temp files: {stray:?}");
}

#[test]
fn modes_and_lorentzian_extraction_agree() {
    let dir = tempdir();
    let net = write_netlist(&dir, "reflective.net", REFLECTIVE);
    let modes_csv = stdout(&run(&[
        "modes",
        "--netlist",
        net.to_str().unwrap(),
        "--fmin",
        "4.9e9",
        "--fmax",
        "5.1e9",
    ]));
    let lines: Vec<&str> = modes_csv.lines().collect();
    assert_eq!(lines[0], "f_r_hz,kappa_over_2pi_hz");
    assert_eq!(lines.len(), 2, "one mode in the window");
    let row: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    let (f_r, kappa_hz) = (row[0], row[1]);
    assert!((f_r - 4.9968e9).abs() < 1e6, "f_r = {f_r}");
    assert!((2.2e5..2.4e5).contains(&kappa_hz), "kappa/2pi = {kappa_hz}");

    // A phase-based line-shape fit over a 10 MHz window around the mode
    // lands in the same decay-rate band used by the batch checks.
    let extract_csv = stdout(&run(&[
        "extract",
        "kappa",
        "--netlist",
        net.to_str().unwrap(),
        "--fmin",
        &format!("{}", f_r - 5e6),
        "--fmax",
        &format!("{}", f_r + 5e6),
        "--method",
        "lorentzian",
    ]));
    let lines: Vec<&str> = extract_csv.lines().collect();
    assert_eq!(lines[0], "f0_hz,kappa_over_2pi_hz,residual");
    let row: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert!(
        (213e3..=227e3).contains(&row[1]),
        "fitted kappa/2pi = {} outside [213, 227] kHz",
        row[1]
    );
    assert!(row[2] < 1e-2, "fit residual {}", row[2]);
}

#[test]
fn coupler_zero_coupling_has_no_coupled_output() {
    let text = stdout(&run(&[
        "coupler", "--zeta", "0", "--theta", "1.2", "--points", "5",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "theta_deg,re_S11,im_S11,re_S21,im_S21,re_S31,im_S31,re_S41,im_S41"
    );
    assert_eq!(lines.len(), 6);
    for row in &lines[1..] {
        let vals: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        // Backward coupler: no reflection, no coupled port at zeta = 0,
        // and a unit-magnitude through path.
        assert!(vals[1].abs() < 1e-15 && vals[2].abs() < 1e-15, "S11 = 0");
        assert!(vals[3].abs() < 1e-15 && vals[4].abs() < 1e-15, "S21 = 0");
        let s31 = (vals[5] * vals[5] + vals[6] * vals[6]).sqrt();
        assert!((s31 - 1.0).abs() < 1e-12, "|S31| = {s31}");
        assert!(vals[7].abs() < 1e-15 && vals[8].abs() < 1e-15, "S41 = 0");
    }
}

#[test]
fn timesim_lossless_keeps_amplitude() {
    let text = stdout(&run(&[
        "timesim", "--l", "1e-9", "--c", "1e-12", "--re-a0", "0.6", "--im-a0", "-0.8",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "time_s,re_a,im_a");
    assert!(lines.len() > 100);
    for row in &lines[1..] {
        let vals: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        let mag = (vals[1] * vals[1] + vals[2] * vals[2]).sqrt();
        assert!((mag - 1.0).abs() < 1e-6, "|a| drifted to {mag}");
    }
}

#[test]
fn parse_error_exits_1_with_line_number() {
    let dir = tempdir();
    let net = write_netlist(&dir, "bad.net", "PORT p1 a 0 Z0=50\nRES r1 a b R=oops\n");
    let out = run(&[
        "sweep",
        "--netlist",
        net.to_str().unwrap(),
        "--fmin",
        "1e9",
        "--fmax",
        "2e9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}

#[test]
fn all_singular_sweep_exits_2() {
    let dir = tempdir();
    // A half-wave line referenced to 2.5 GHz is singular at every multiple
    // of 2.5 GHz; a two-point grid hitting 2.5 and 5 GHz exactly has no
    // valid samples left.
    let net = write_netlist(
        &dir,
        "singular.net",
        "PORT p1 a 0 Z0=50\nTLINE t1 a b Z0=50 EL=180 F0=2.5e9\nSHORTSTUB s1 b Z0=50 EL=90 F0=2.5e9\n",
    );
    let out = run(&[
        "sweep",
        "--netlist",
        net.to_str().unwrap(),
        "--fmin",
        "2.5e9",
        "--fmax",
        "5e9",
        "--points",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn empty_mode_window_exits_3() {
    let dir = tempdir();
    let net = write_netlist(&dir, "reflective.net", REFLECTIVE);
    let out = run(&[
        "modes",
        "--netlist",
        net.to_str().unwrap(),
        "--fmin",
        "1e9",
        "--fmax",
        "1.1e9",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn missing_netlist_file_exits_1() {
    let out = run(&[
        "modes",
        "--netlist",
        "/nonexistent/x.net",
        "--fmin",
        "1e9",
        "--fmax",
        "2e9",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "resonet-cli-test-{}-{:x}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
