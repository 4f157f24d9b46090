//! Frequency-domain nodal-admittance solver for netlists.
//!
//! Assembles the node-admittance matrix from element stamps (`e^{jωt}`
//! convention), converts it to scattering parameters against the per-port
//! reference impedances, locates complex eigenmodes as roots of
//! `det(Y_loaded) = 0`, and extracts decay rates by fitting the reflection
//! phase near an isolated mode.

use crate::error::{Error, Result};
use crate::extract::{self, ResonanceFit};
use crate::netlist::{ElementKind, Netlist};
use crate::numerics::{refine_root, AxisUnit, ComplexMatrix, ComplexTrace, C64};
use std::f64::consts::PI;

/// Number of real-frequency samples scanned per mode-search window.
const MODE_SCAN_POINTS: usize = 2001;
/// Samples used by [`ringdown`] across its span.
const RINGDOWN_POINTS: usize = 1601;
/// Minimum electrical-angle distance (radians) a root seed must keep from
/// any element-stamp pole (cot/csc/tan singularities).
const POLE_GUARD_RAD: f64 = 1e-6;
/// RMS phase residual (radians) above which a ring-down fit is rejected.
const RINGDOWN_RMS_LIMIT: f64 = 1e-2;

fn hz_to_rad(f_hz: f64) -> f64 {
    2.0 * PI * f_hz
}

/// Electrical angle of a line element at complex frequency `omega`:
/// the angle is `el_deg` (in degrees) at the reference frequency and
/// scales linearly with frequency.
fn electrical_angle(el_deg: f64, f_ref: f64, omega: C64) -> C64 {
    omega * (el_deg * PI / 180.0 / (2.0 * PI * f_ref))
}

/// Add `y` between two nodes, either of which may be ground (`None`).
fn stamp_floating(m: &mut ComplexMatrix, a: Option<usize>, b: Option<usize>, y: C64) {
    if let Some(i) = a {
        m.add_at(i, i, y);
    }
    if let Some(j) = b {
        m.add_at(j, j, y);
    }
    if let (Some(i), Some(j)) = (a, b) {
        m.add_at(i, j, -y);
        m.add_at(j, i, -y);
    }
}

/// Add a node-to-ground admittance block: `block[r][c]` couples node
/// `nodes[r]` to node `nodes[c]`; ground rows/columns are dropped.
fn stamp_block(m: &mut ComplexMatrix, nodes: &[Option<usize>], block: &ComplexMatrix) {
    for (r, &nr) in nodes.iter().enumerate() {
        let Some(i) = nr else { continue };
        for (c, &nc) in nodes.iter().enumerate() {
            let Some(j) = nc else { continue };
            m.add_at(i, j, block.at(r, c));
        }
    }
}

fn singular_element(name: &str, omega: C64) -> Error {
    Error::ElementSingularAtFrequency {
        name: name.to_string(),
        freq_hz: omega.re / (2.0 * PI),
    }
}

/// Node-admittance matrix of the bare netlist at a complex frequency
/// (real frequencies are the `omega.im = 0` case; mode search evaluates
/// off the real axis). Ports contribute nothing here.
pub fn assemble_admittance_at(net: &Netlist, omega: C64) -> Result<ComplexMatrix> {
    let j = C64::new(0.0, 1.0);
    let mut y = ComplexMatrix::zeros(net.node_count(), net.node_count());
    for e in net.elements() {
        let idx: Vec<Option<usize>> = e.nodes().iter().map(|n| net.node_index(n)).collect();
        match e.kind() {
            ElementKind::Resistor { r } => {
                stamp_floating(&mut y, idx[0], idx[1], C64::new(1.0 / r, 0.0));
            }
            ElementKind::Capacitor { c } => {
                stamp_floating(&mut y, idx[0], idx[1], j * omega * c);
            }
            ElementKind::Inductor { l } => {
                stamp_floating(&mut y, idx[0], idx[1], 1.0 / (j * omega * l));
            }
            ElementKind::TLine { z0, el_deg, f_ref } => {
                let theta = electrical_angle(el_deg, f_ref, omega);
                let s = theta.sin();
                if s.norm() < 1e-12 {
                    return Err(singular_element(e.name(), omega));
                }
                let y0 = 1.0 / z0;
                let diag = -j * y0 * theta.cos() / s;
                let off = j * y0 / s;
                let block = ComplexMatrix::from_rows(&[vec![diag, off], vec![off, diag]]);
                stamp_block(&mut y, &idx, &block);
            }
            ElementKind::CoupledLine {
                z_even,
                z_odd,
                el_deg,
                f_ref,
            } => {
                let zeta = (z_even - z_odd) / (z_even + z_odd);
                let y0 = 1.0 / (z_even * z_odd).sqrt();
                let theta = electrical_angle(el_deg, f_ref, omega);
                let s = theta.sin();
                if s.norm() < 1e-12 {
                    return Err(singular_element(e.name(), omega));
                }
                // Same kron(ends, lines) structure as the real-frequency
                // coupler admittance, continued to complex angles.
                let scale = y0 / (1.0 - zeta * zeta).sqrt();
                let cot = theta.cos() / s;
                let csc = 1.0 / s;
                let ends = [[-cot, csc], [csc, -cot]];
                let lines = [[1.0, -zeta], [-zeta, 1.0]];
                let mut block = ComplexMatrix::zeros(4, 4);
                for a in 0..2 {
                    for b in 0..2 {
                        for li in 0..2 {
                            for lj in 0..2 {
                                block.set(
                                    2 * a + li,
                                    2 * b + lj,
                                    j * scale * lines[li][lj] * ends[a][b],
                                );
                            }
                        }
                    }
                }
                stamp_block(&mut y, &idx, &block);
            }
            ElementKind::OpenStub { z0, el_deg, f_ref } => {
                let theta = electrical_angle(el_deg, f_ref, omega);
                let c = theta.cos();
                if c.norm() < 1e-12 {
                    return Err(singular_element(e.name(), omega));
                }
                if let Some(i) = idx[0] {
                    y.add_at(i, i, j * (theta.sin() / c) / z0);
                }
            }
            ElementKind::ShortStub { z0, el_deg, f_ref } => {
                let theta = electrical_angle(el_deg, f_ref, omega);
                let s = theta.sin();
                if s.norm() < 1e-12 {
                    return Err(singular_element(e.name(), omega));
                }
                if let Some(i) = idx[0] {
                    y.add_at(i, i, -j * (theta.cos() / s) / z0);
                }
            }
        }
    }
    Ok(y)
}

/// Node-admittance matrix at a real frequency in rad/s.
pub fn assemble_admittance(net: &Netlist, omega: f64) -> Result<ComplexMatrix> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::invalid(format!(
            "frequency must be positive, got {omega} rad/s"
        )));
    }
    assemble_admittance_at(net, C64::new(omega, 0.0))
}

/// Bare admittance plus the matched termination `1/Z0` of every port.
fn loaded_admittance_at(net: &Netlist, omega: C64) -> Result<ComplexMatrix> {
    let mut y = assemble_admittance_at(net, omega)?;
    for p in net.ports() {
        let i = net
            .node_index(p.node())
            .expect("port nodes are validated at netlist construction");
        y.add_at(i, i, C64::new(1.0 / p.z0(), 0.0));
    }
    Ok(y)
}

/// Scattering matrix (ports × ports) at one real frequency.
///
/// Solves the terminated network once per excited port: injecting a unit
/// incident power wave at port k forces a nodal current `2/√Z0k` through
/// `Y + diag(1/Z0)`, and `S[p][k] = v[node_p]/√Z0p − δ_pk`. Internal
/// nodes are eliminated by the factorization itself, so this equals the
/// port-reduced admittance-to-scattering conversion.
pub fn sparams_at(net: &Netlist, omega: f64) -> Result<ComplexMatrix> {
    let n_ports = net.port_count();
    if n_ports == 0 {
        return Err(Error::invalid("netlist has no ports"));
    }
    let y = loaded_admittance_at(net, C64::new(omega, 0.0))?;
    let mut rhs = ComplexMatrix::zeros(net.node_count(), n_ports);
    let mut port_nodes = Vec::with_capacity(n_ports);
    let mut port_z0 = Vec::with_capacity(n_ports);
    for (k, p) in net.ports().enumerate() {
        let node = net.node_index(p.node()).expect("validated");
        rhs.add_at(node, k, C64::new(2.0 / p.z0().sqrt(), 0.0));
        port_nodes.push(node);
        port_z0.push(p.z0());
    }
    let x = y.solve_columns(&rhs).map_err(|_| Error::SingularNetwork {
        freq_hz: omega / (2.0 * PI),
    })?;
    let mut s = ComplexMatrix::zeros(n_ports, n_ports);
    for k in 0..n_ports {
        for p in 0..n_ports {
            let mut v = x.at(port_nodes[p], k) / port_z0[p].sqrt();
            if p == k {
                v -= 1.0;
            }
            s.set(p, k, v);
        }
    }
    Ok(s)
}

/// Result of a frequency sweep: one scattering matrix per retained
/// frequency, plus the list of samples skipped at stamp/network
/// singularities (skipped points are flagged, never interpolated).
#[derive(Debug, Clone)]
pub struct Sweep {
    freqs_hz: Vec<f64>,
    skipped_hz: Vec<f64>,
    port_count: usize,
    matrices: Vec<ComplexMatrix>,
}

impl Sweep {
    /// Frequencies (Hz) of the retained samples, ascending.
    pub fn freqs_hz(&self) -> &[f64] {
        &self.freqs_hz
    }

    /// Frequencies (Hz) skipped because an element stamp or the loaded
    /// network was singular there.
    pub fn skipped_hz(&self) -> &[f64] {
        &self.skipped_hz
    }

    pub fn port_count(&self) -> usize {
        self.port_count
    }

    pub fn len(&self) -> usize {
        self.freqs_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs_hz.is_empty()
    }

    /// Scattering matrix of the i-th retained sample.
    pub fn s_matrix(&self, i: usize) -> &ComplexMatrix {
        &self.matrices[i]
    }

    /// One scattering entry as a trace over angular frequency (rad/s).
    pub fn trace(&self, row: usize, col: usize) -> Result<ComplexTrace> {
        if row >= self.port_count || col >= self.port_count {
            return Err(Error::invalid(format!(
                "S({},{}) out of range for {} port(s)",
                row + 1,
                col + 1,
                self.port_count
            )));
        }
        let axis: Vec<f64> = self.freqs_hz.iter().map(|&f| hz_to_rad(f)).collect();
        let values: Vec<C64> = self.matrices.iter().map(|m| m.at(row, col)).collect();
        ComplexTrace::new(axis, values, AxisUnit::RadPerSec)
    }
}

/// Inclusive linear frequency grid in Hz.
pub fn frequency_grid(fmin_hz: f64, fmax_hz: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 grid points, got {points}"
        )));
    }
    if !(fmin_hz > 0.0) || !(fmax_hz > fmin_hz) || !fmax_hz.is_finite() {
        return Err(Error::invalid(format!(
            "frequency window must satisfy 0 < fmin < fmax, got [{fmin_hz}, {fmax_hz}]"
        )));
    }
    let step = (fmax_hz - fmin_hz) / (points - 1) as f64;
    // Pin the final sample to fmax exactly (the incremental form can land
    // one rounding step away).
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                fmax_hz
            } else {
                fmin_hz + step * i as f64
            }
        })
        .collect())
}

/// Scattering sweep over the given frequencies (Hz). Samples where an
/// element stamp or the terminated network is singular are skipped and
/// reported in [`Sweep::skipped_hz`]; every other error aborts the sweep.
pub fn sweep(net: &Netlist, freqs_hz: &[f64]) -> Result<Sweep> {
    if net.port_count() == 0 {
        return Err(Error::invalid("netlist has no ports"));
    }
    if freqs_hz.is_empty() {
        return Err(Error::invalid("empty frequency grid"));
    }
    let mut out = Sweep {
        freqs_hz: Vec::with_capacity(freqs_hz.len()),
        skipped_hz: Vec::new(),
        port_count: net.port_count(),
        matrices: Vec::with_capacity(freqs_hz.len()),
    };
    for &f in freqs_hz {
        if !(f > 0.0) || !f.is_finite() {
            return Err(Error::invalid(format!(
                "frequency must be positive, got {f} Hz"
            )));
        }
        match sparams_at(net, hz_to_rad(f)) {
            Ok(s) => {
                out.freqs_hz.push(f);
                out.matrices.push(s);
            }
            Err(Error::ElementSingularAtFrequency { .. }) | Err(Error::SingularNetwork { .. }) => {
                out.skipped_hz.push(f);
            }
            Err(e) => return Err(e),
        }
    }
    if out.matrices.is_empty() {
        return Err(Error::SingularNetwork {
            freq_hz: freqs_hz[0],
        });
    }
    Ok(out)
}

/// One complex eigenmode of the terminated network: `det(Y_loaded)` has a
/// root at `omega_r + j·kappa/2` under the `e^{jωt}` convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Resonance angular frequency (rad/s).
    pub omega_r: f64,
    /// Energy decay rate (rad/s); zero for a lossless unported net.
    pub kappa: f64,
}

impl Mode {
    pub fn f_r_hz(&self) -> f64 {
        self.omega_r / (2.0 * PI)
    }

    pub fn kappa_over_2pi_hz(&self) -> f64 {
        self.kappa / (2.0 * PI)
    }
}

/// Distance (radians) from `theta` to the nearest stamp pole of the
/// element kind: multiples of π for lines/short stubs and coupled lines,
/// odd multiples of π/2 for open stubs. Lumped elements have no poles.
fn pole_distance(kind: ElementKind, omega: f64) -> f64 {
    let angle = |el_deg: f64, f_ref: f64| electrical_angle(el_deg, f_ref, C64::new(omega, 0.0)).re;
    match kind {
        ElementKind::TLine { el_deg, f_ref, .. }
        | ElementKind::CoupledLine { el_deg, f_ref, .. }
        | ElementKind::ShortStub { el_deg, f_ref, .. } => {
            let t = angle(el_deg, f_ref);
            (t - PI * (t / PI).round()).abs()
        }
        ElementKind::OpenStub { el_deg, f_ref, .. } => {
            let t = angle(el_deg, f_ref) - PI / 2.0;
            (t - PI * (t / PI).round()).abs()
        }
        ElementKind::Resistor { .. }
        | ElementKind::Capacitor { .. }
        | ElementKind::Inductor { .. } => f64::INFINITY,
    }
}

/// Find the complex eigenmodes of the matched-terminated network inside a
/// frequency window (Hz).
///
/// Scans `|det(Y_loaded)|` (rows equilibrated with fixed scales taken at
/// the window center) over 2001 real frequencies, takes interior local
/// minima as seeds — discarding seeds closer than 1e−6 rad to an element
/// stamp pole — and polishes each with a complex Newton iteration. Roots
/// are deduplicated and returned sorted by frequency.
pub fn find_modes(net: &Netlist, f_window_hz: (f64, f64)) -> Result<Vec<Mode>> {
    let (fmin, fmax) = f_window_hz;
    if !(fmin > 0.0) || !(fmax > fmin) || !fmax.is_finite() {
        return Err(Error::invalid(format!(
            "mode window must satisfy 0 < fmin < fmax, got [{fmin}, {fmax}]"
        )));
    }
    let wmin = hz_to_rad(fmin);
    let wmax = hz_to_rad(fmax);

    // Fixed row scales from the window center keep the scaled determinant
    // in floating-point range without moving its zeros; if the center sits
    // on a stamp pole, probe two nearby fractions of the window instead.
    let mut scales: Option<Vec<f64>> = None;
    for frac in [0.5, 0.497, 0.503] {
        let wc = wmin + frac * (wmax - wmin);
        if let Ok(y) = loaded_admittance_at(net, C64::new(wc, 0.0)) {
            let s: Vec<f64> = y
                .row_inf_norms()
                .iter()
                .map(|&v| if v > 0.0 { v } else { 1.0 })
                .collect();
            scales = Some(s);
            break;
        }
    }
    let scales = scales.ok_or_else(|| {
        Error::invalid("could not evaluate the network anywhere near the window center")
    })?;

    let det_at = |z: C64, scales: &[f64]| -> Result<C64> {
        Ok(loaded_admittance_at(net, z)?.det_scaled(scales))
    };

    let n = MODE_SCAN_POINTS;
    let step = (wmax - wmin) / (n - 1) as f64;
    let mut mags = Vec::with_capacity(n);
    for i in 0..n {
        let w = wmin + step * i as f64;
        let m = match det_at(C64::new(w, 0.0), &scales) {
            Ok(d) => d.norm(),
            // A stamp pole inside the window: the determinant diverges
            // there, so the sample cannot seed a minimum.
            Err(Error::ElementSingularAtFrequency { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        mags.push(m);
    }

    let mut modes: Vec<Mode> = Vec::new();
    for i in 1..n - 1 {
        if !mags[i].is_finite() || mags[i] > mags[i - 1] || mags[i] > mags[i + 1] {
            continue;
        }
        let w_seed = wmin + step * i as f64;
        let near_pole = net
            .elements()
            .any(|e| pole_distance(e.kind(), w_seed) < POLE_GUARD_RAD);
        if near_pole {
            continue;
        }
        let Ok(root) = refine_root(|z| det_at(z, &scales), C64::new(w_seed, 0.0)) else {
            continue;
        };
        if root.re < wmin || root.re > wmax {
            continue;
        }
        // Passive networks decay: reject spurious growing roots, clamp
        // the lossless-limit imaginary part to zero.
        if root.im < -1e-8 * root.re {
            continue;
        }
        let mode = Mode {
            omega_r: root.re,
            kappa: (2.0 * root.im).max(0.0),
        };
        let duplicate = modes
            .iter()
            .any(|m| (m.omega_r - mode.omega_r).abs() <= 1e-6 * mode.omega_r);
        if !duplicate {
            modes.push(mode);
        }
    }
    modes.sort_by(|a, b| a.omega_r.total_cmp(&b.omega_r));
    if modes.is_empty() {
        return Err(Error::NoModeInWindow);
    }
    Ok(modes)
}

/// Decay-rate extraction from the reflection seen at one port: sweeps
/// `S_pp` over `span_hz` around `f_center_hz` (1601 points) and fits the
/// unwrapped phase to the Lorentzian reflection-phase model. Equivalent
/// to a time-domain ring-down measurement for an isolated mode.
///
/// Fails with `PoorFit` when the RMS phase residual exceeds 1e−2 rad
/// (multiple modes or strong background in the span).
pub fn ringdown(net: &Netlist, port: &str, f_center_hz: f64, span_hz: f64) -> Result<ResonanceFit> {
    let Some(p) = net.port_index(port) else {
        return Err(Error::invalid(format!("unknown port '{port}'")));
    };
    if !(span_hz > 0.0) || !(f_center_hz - span_hz / 2.0 > 0.0) {
        return Err(Error::invalid(format!(
            "ring-down window must stay positive, got center {f_center_hz} Hz span {span_hz} Hz"
        )));
    }
    let grid = frequency_grid(
        f_center_hz - span_hz / 2.0,
        f_center_hz + span_hz / 2.0,
        RINGDOWN_POINTS,
    )?;
    let swept = sweep(net, &grid)?;
    let trace = swept.trace(p, p)?;
    let fit = extract::lorentzian_phase_fit(&trace)?;
    if !(fit.residual <= RINGDOWN_RMS_LIMIT) {
        return Err(Error::PoorFit { rms: fit.residual });
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributed::coupler_admittance;
    use crate::netlist::parse_netlist;

    const REFLECTIVE_NETLIST: &str = "\
# Reflective quarter-wave resonator probed through a backward coupler.
PORT p1 feed_in 0 Z0=50
CLINE bc feed_in res_short feed_stub res_open ZE=70 ZO=35.714285714285715 EL=1 F0=5e9
SHORTSTUB st_short res_short Z0=50 EL=45 F0=5e9
OPENSTUB st_feed feed_stub Z0=50 EL=135 F0=5e9
OPENSTUB st_open res_open Z0=50 EL=44 F0=5e9
";

    fn symmetric_reflective_netlist(zeta: f64, el_c_deg: f64) -> String {
        let ze = 50.0 * ((1.0 + zeta) / (1.0 - zeta)).sqrt();
        let zo = 2500.0 / ze;
        let l1 = (90.0 - el_c_deg) / 2.0;
        let l2 = 90.0 - l1 - el_c_deg;
        let lf = l1 + 90.0;
        format!(
            "PORT p1 feed_in 0 Z0=50\n\
             CLINE bc feed_in res_short feed_stub res_open ZE={ze:.12e} ZO={zo:.12e} EL={el_c_deg} F0=5e9\n\
             SHORTSTUB st_short res_short Z0=50 EL={l1} F0=5e9\n\
             OPENSTUB st_feed feed_stub Z0=50 EL={lf} F0=5e9\n\
             OPENSTUB st_open res_open Z0=50 EL={l2} F0=5e9\n"
        )
    }

    #[test]
    fn capacitor_stamps_one_by_one() {
        let net = parse_netlist("CAP c1 n1 0 C=10f").unwrap();
        let omega = 2.0 * PI * 5e9;
        let y = assemble_admittance(&net, omega).unwrap();
        assert_eq!(y.rows(), 1);
        let expect = C64::new(0.0, omega * 10e-15);
        assert!((y.at(0, 0) - expect).norm() <= 1e-15 * expect.norm());
    }

    #[test]
    fn quarter_wave_line_stamp() {
        let net = parse_netlist("PORT p1 n1 0 Z0=50\nTLINE t1 n1 n2 Z0=50 EL=90 F0=5e9").unwrap();
        let y = assemble_admittance(&net, 2.0 * PI * 5e9).unwrap();
        let y0 = 1.0 / 50.0;
        let a = net.node_index("n1").unwrap();
        let b = net.node_index("n2").unwrap();
        assert!(y.at(a, a).norm() < 1e-15);
        assert!(y.at(b, b).norm() < 1e-15);
        assert!((y.at(a, b) - C64::new(0.0, y0)).norm() < 1e-15);
        assert!((y.at(b, a) - C64::new(0.0, y0)).norm() < 1e-15);
    }

    #[test]
    fn uncoupled_line_pair_splits_into_two_lines() {
        let pair = parse_netlist(
            "PORT p1 a 0 Z0=50\nPORT p2 b 0 Z0=50\nCLINE c1 a b c d ZE=50 ZO=50 EL=37 F0=5e9",
        )
        .unwrap();
        let two = parse_netlist(
            "PORT p1 a 0 Z0=50\nPORT p2 b 0 Z0=50\n\
             TLINE t1 a c Z0=50 EL=37 F0=5e9\nTLINE t2 b d Z0=50 EL=37 F0=5e9",
        )
        .unwrap();
        for f in [3.1e9, 5e9, 8.7e9] {
            let ya = assemble_admittance(&pair, 2.0 * PI * f).unwrap();
            let yb = assemble_admittance(&two, 2.0 * PI * f).unwrap();
            for name_r in ["a", "b", "c", "d"] {
                for name_c in ["a", "b", "c", "d"] {
                    let va = ya.at(
                        pair.node_index(name_r).unwrap(),
                        pair.node_index(name_c).unwrap(),
                    );
                    let vb = yb.at(
                        two.node_index(name_r).unwrap(),
                        two.node_index(name_c).unwrap(),
                    );
                    assert!(
                        (va - vb).norm() <= 1e-12 * (1.0 + vb.norm()),
                        "mismatch at ({name_r},{name_c}): {va} vs {vb}"
                    );
                }
            }
        }
    }

    #[test]
    fn coupled_line_stamp_matches_coupler_admittance() {
        let net = parse_netlist(
            "PORT p1 a 0 Z0=50\nCLINE c1 a b c d ZE=70 ZO=35.714285714285715 EL=1 F0=5e9",
        )
        .unwrap();
        let f = 4.9e9;
        let y = assemble_admittance(&net, 2.0 * PI * f).unwrap();
        let ze = 70.0;
        let zo = 35.714285714285715;
        let zeta = (ze - zo) / (ze + zo);
        let theta = (1.0_f64).to_radians() * f / 5e9;
        let reference = coupler_admittance(zeta, theta, 1.0 / (ze * zo).sqrt()).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert!(
                    (y.at(r, c) - reference.at(r, c)).norm() <= 1e-12 * reference.at(r, c).norm(),
                    "entry ({r},{c})"
                );
            }
        }
    }

    #[test]
    fn series_resistor_splits_power() {
        let net =
            parse_netlist("PORT p1 n1 0 Z0=50\nRES r1 n1 n2 R=50\nPORT p2 n2 0 Z0=50").unwrap();
        for f in [1e6, 1e9, 7.3e9] {
            let s = sparams_at(&net, 2.0 * PI * f).unwrap();
            assert!((s.at(0, 0) - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
            assert!((s.at(1, 1) - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
            assert!((s.at(0, 1) - C64::new(2.0 / 3.0, 0.0)).norm() < 1e-12);
            assert!((s.at(1, 0) - C64::new(2.0 / 3.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn lossless_sweeps_are_unitary_and_reciprocal() {
        let reflective = parse_netlist(REFLECTIVE_NETLIST).unwrap();
        let transmissive = parse_netlist(
            "PORT p1 feed_l 0 Z0=50\nPORT p2 feed_r 0 Z0=50\n\
             CLINE bc feed_l res_l feed_r res_r ZE=70 ZO=35.714285714285715 EL=1 F0=5e9\n\
             SHORTSTUB s1 res_l Z0=50 EL=80 F0=5e9\nOPENSTUB o1 res_r Z0=50 EL=9 F0=5e9",
        )
        .unwrap();
        for net in [&reflective, &transmissive] {
            let grid = frequency_grid(4.99e9, 5.01e9, 11).unwrap();
            let swept = sweep(net, &grid).unwrap();
            assert!(swept.skipped_hz().is_empty());
            for i in 0..swept.len() {
                let s = swept.s_matrix(i);
                let gram = s.conj_transpose().matmul(s);
                let eye = ComplexMatrix::identity(s.rows());
                assert!(gram.sub(&eye).max_abs() <= 1e-8, "unitarity at sample {i}");
                assert!(
                    s.sub(&s.transpose()).max_abs() <= 1e-10,
                    "reciprocity at sample {i}"
                );
            }
        }
    }

    #[test]
    fn singular_sample_is_skipped_and_flagged() {
        let net = parse_netlist(
            "PORT p1 n1 0 Z0=50\nTLINE t1 n1 n2 Z0=50 EL=180 F0=5e9\nPORT p2 n2 0 Z0=50",
        )
        .unwrap();
        let swept = sweep(&net, &[4.9999e9, 5e9, 5.0001e9]).unwrap();
        assert_eq!(swept.freqs_hz(), &[4.9999e9, 5.0001e9]);
        assert_eq!(swept.skipped_hz(), &[5e9]);
        let trace = swept.trace(0, 0).unwrap();
        assert_eq!(trace.len(), 2);
    }

    #[test]
    fn shunt_lc_behind_coupling_cap_mode() {
        // Pole of a shunt LC reached through a small series capacitor from
        // a matched port. The decay rate of the weakly coupled limit is
        // kappa ≈ ω_r² Cc² Z0 / (C + Cc).
        let net = parse_netlist(
            "PORT p1 nf 0 Z0=50\nCAP cc nf nr C=8f\n\
             CAP c1 nr 0 C=1.0132118364233778p\nIND l1 nr 0 L=1n",
        )
        .unwrap();
        let c_eff: f64 = 1.0132118364233778e-12 + 8e-15;
        let w0 = 1.0 / (1e-9 * c_eff).sqrt();
        let modes = find_modes(&net, (w0 / (2.0 * PI) * 0.9, w0 / (2.0 * PI) * 1.1)).unwrap();
        assert_eq!(modes.len(), 1);
        let m = modes[0];
        assert!(
            (m.omega_r - w0).abs() <= 2e-4 * w0,
            "omega_r {} vs {}",
            m.omega_r,
            w0
        );
        let kappa_est = m.omega_r * m.omega_r * 8e-15 * 8e-15 * 50.0 / c_eff;
        assert!(m.kappa > 0.0);
        assert!(
            (m.kappa - kappa_est).abs() <= 0.01 * kappa_est,
            "kappa {} vs weak-coupling estimate {}",
            m.kappa,
            kappa_est
        );
        let fit = ringdown(&net, "p1", m.f_r_hz(), 40.0 * m.kappa_over_2pi_hz()).unwrap();
        assert!((fit.kappa - m.kappa).abs() <= 0.01 * m.kappa);
    }

    #[test]
    fn lossless_lc_without_ports_has_zero_kappa() {
        let net = parse_netlist("CAP c1 n1 0 C=1p\nIND l1 n1 0 L=1n").unwrap();
        let w0 = 1.0 / (1e-9_f64 * 1e-12).sqrt();
        let f0 = w0 / (2.0 * PI);
        let modes = find_modes(&net, (0.9 * f0, 1.1 * f0)).unwrap();
        assert_eq!(modes.len(), 1);
        assert!((modes[0].omega_r - w0).abs() <= 1e-8 * w0);
        assert!(modes[0].kappa <= 1e-9 * modes[0].omega_r);
    }

    #[test]
    fn empty_window_reports_no_mode() {
        let net = parse_netlist("CAP c1 n1 0 C=1p\nIND l1 n1 0 L=1n").unwrap();
        let f0 = 1.0 / (2.0 * PI * (1e-9_f64 * 1e-12).sqrt());
        let err = find_modes(&net, (2.0 * f0, 2.1 * f0)).unwrap_err();
        assert!(matches!(err, Error::NoModeInWindow));
    }

    #[test]
    fn quarter_wave_resonator_mode_and_ringdown_agree() {
        // Backward-coupled quarter-wave resonator, weak coupling: the
        // det(Y)=0 root and the reflection-phase fit must agree.
        let net = parse_netlist(&symmetric_reflective_netlist(0.02, 9.0)).unwrap();
        let modes = find_modes(&net, (4.9e9, 5.1e9)).unwrap();
        assert_eq!(modes.len(), 1);
        let m = modes[0];
        assert!(
            (m.f_r_hz() - 4.999902e9).abs() <= 1e-4 * 4.999902e9,
            "f_r = {}",
            m.f_r_hz()
        );
        assert!(
            (m.kappa_over_2pi_hz() - 62.339e3).abs() <= 0.01 * 62.339e3,
            "kappa/2pi = {}",
            m.kappa_over_2pi_hz()
        );
        let fit = ringdown(&net, "p1", m.f_r_hz(), 10e6).unwrap();
        assert!(
            (fit.kappa - m.kappa).abs() <= 0.01 * m.kappa,
            "ringdown {} vs mode {}",
            fit.kappa / (2.0 * PI),
            m.kappa_over_2pi_hz()
        );
    }

    #[test]
    fn reflective_resonator_keeps_unit_magnitude_and_full_phase_swing() {
        let net = parse_netlist(REFLECTIVE_NETLIST).unwrap();
        let grid = frequency_grid(4.9968e9 - 2e6, 4.9968e9 + 2e6, 101).unwrap();
        let swept = sweep(&net, &grid).unwrap();
        let trace = swept.trace(0, 0).unwrap();
        for v in trace.values() {
            assert!((v.norm() - 1.0).abs() <= 1e-8);
        }
        let phase = trace.unwrapped_phase().unwrap();
        let swing = (phase[phase.len() - 1] - phase[0]).abs();
        assert!(
            (0.9 * 2.0 * PI..=1.1 * 2.0 * PI).contains(&swing),
            "phase swing {swing} rad"
        );
    }

    #[test]
    fn wide_span_with_background_fails_the_fit_gate() {
        let net = parse_netlist(REFLECTIVE_NETLIST).unwrap();
        let err = ringdown(&net, "p1", 5e9, 2e9).unwrap_err();
        assert!(matches!(err, Error::PoorFit { .. }), "got {err:?}");
    }

    #[test]
    fn grid_and_argument_validation() {
        let grid = frequency_grid(1e9, 2e9, 5).unwrap();
        assert_eq!(grid, vec![1e9, 1.25e9, 1.5e9, 1.75e9, 2e9]);
        assert!(frequency_grid(1e9, 2e9, 1).is_err());
        assert!(frequency_grid(2e9, 1e9, 5).is_err());
        assert!(frequency_grid(0.0, 1e9, 5).is_err());

        let net = parse_netlist("CAP c1 n1 0 C=1p").unwrap();
        assert!(sweep(&net, &[1e9]).is_err(), "no ports");
        let ported = parse_netlist("PORT p1 n1 0 Z0=50\nCAP c1 n1 0 C=1p").unwrap();
        assert!(sweep(&ported, &[]).is_err(), "empty grid");
        assert!(ringdown(&ported, "nope", 5e9, 1e6).is_err(), "unknown port");
        assert!(
            ringdown(&ported, "p1", 1e6, 1e9).is_err(),
            "window below zero"
        );
    }
}
