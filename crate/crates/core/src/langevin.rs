//! Open-system resonator models: a resonator loaded by one semi-infinite
//! transmission line, or by an arbitrary lossless linear junction network
//! with several coupling ports, in both dynamic (equation-of-motion) and
//! steady-state (scattering) form.
//!
//! Conventions: incoming wave amplitude `s_in` carries power |s_in|^2; the
//! reference-plane reflection phase `phi0` is the reflection phase seen on
//! the line when the resonator is absent.

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64};
use std::f64::consts::PI;

/// Resonator coupled to a single semi-infinite transmission line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglyLoaded {
    omega0: f64,
    kappa: f64,
    phi0: f64,
}

impl SinglyLoaded {
    pub fn new(omega0: f64, kappa: f64, phi0: f64) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::invalid(format!(
                "resonance frequency must be positive, got {omega0}"
            )));
        }
        if kappa < 0.0 || !kappa.is_finite() {
            return Err(Error::CouplingOutOfRange { value: kappa });
        }
        if !phi0.is_finite() {
            return Err(Error::invalid("reflection phase must be finite"));
        }
        // Normalize the reflection phase into (-pi, pi].
        let mut ph = phi0.rem_euclid(2.0 * PI);
        if ph > PI {
            ph -= 2.0 * PI;
        }
        Ok(SinglyLoaded {
            omega0,
            kappa,
            phi0: ph,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }
}

/// Langevin equation of motion:
/// da/dt = j*w0*a - (kappa/2)*a + sqrt(kappa)*s_in.
pub fn langevin_rhs(a: C64, s_in: C64, sys: &SinglyLoaded) -> C64 {
    (C64::new(0.0, sys.omega0) - 0.5 * sys.kappa) * a + sys.kappa.sqrt() * s_in
}

/// Input-output relation: s_out = e^{-j*phi0} (s_in - sqrt(kappa)*a).
pub fn input_output(s_in: C64, a: C64, sys: &SinglyLoaded) -> C64 {
    C64::from_polar(1.0, -sys.phi0) * (s_in - sys.kappa.sqrt() * a)
}

/// Steady-state mode amplitude under a drive at angular frequency `omega`:
/// a = sqrt(kappa) * s_in / (j(omega - omega0) + kappa/2).
pub fn steady_state_mode(omega: f64, s_in: C64, sys: &SinglyLoaded) -> C64 {
    sys.kappa.sqrt() * s_in / (C64::new(0.5 * sys.kappa, omega - sys.omega0))
}

/// Reflection coefficient of the singly loaded resonator:
/// S11 = e^{-j*phi0} (j(w-w0) - kappa/2) / (j(w-w0) + kappa/2).
pub fn s11_singly_loaded(omega: f64, sys: &SinglyLoaded) -> Result<C64> {
    if sys.kappa == 0.0 {
        return Err(Error::ZeroKappa);
    }
    let delta = omega - sys.omega0;
    let num = C64::new(-0.5 * sys.kappa, delta);
    let den = C64::new(0.5 * sys.kappa, delta);
    Ok(C64::from_polar(1.0, -sys.phi0) * num / den)
}

/// Slope of the reflection phase at resonance: -4/kappa (rad * s).
///
/// Off resonance the slope falls as a Lorentzian,
/// d(angle S11)/dw = (-4/kappa) / (1 + ((w-w0)/(kappa/2))^2),
/// with an inflection point exactly at w0.
pub fn phase_slope_at_resonance(sys: &SinglyLoaded) -> Result<f64> {
    if sys.kappa == 0.0 {
        return Err(Error::ZeroKappa);
    }
    Ok(-4.0 / sys.kappa)
}

/// Resonator coupled to M ports of an N-port lossless junction network.
///
/// The network scattering matrix is stored whole; the coupled-port indices
/// select the rows/columns facing the resonator. Each coupled port carries a
/// rate `kappa` and a reference-plane reflection phase `phi0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NPortCoupling {
    s: ComplexMatrix,
    coupled_ports: Vec<usize>,
    independent_ports: Vec<usize>,
    kappa_vec: Vec<f64>,
    phi0_vec: Vec<f64>,
}

impl NPortCoupling {
    pub fn new(
        s: ComplexMatrix,
        coupled_ports: Vec<usize>,
        kappa_vec: Vec<f64>,
        phi0_vec: Vec<f64>,
    ) -> Result<Self> {
        let n = s.rows();
        if s.cols() != n {
            return Err(Error::invalid("network scattering matrix must be square"));
        }
        let m = coupled_ports.len();
        if m > n {
            return Err(Error::invalid("more coupled ports than network ports"));
        }
        if kappa_vec.len() != m || phi0_vec.len() != m {
            return Err(Error::invalid(
                "kappa and phi0 vectors must match the coupled-port count",
            ));
        }
        let mut seen = vec![false; n];
        for &p in &coupled_ports {
            if p >= n {
                return Err(Error::invalid(format!(
                    "coupled port index {p} out of range"
                )));
            }
            if seen[p] {
                return Err(Error::invalid(format!("coupled port index {p} repeated")));
            }
            seen[p] = true;
        }
        for &k in &kappa_vec {
            if k < 0.0 || !k.is_finite() {
                return Err(Error::CouplingOutOfRange { value: k });
            }
        }
        // Lossless reciprocal junction: S S^dagger = I and S = S^t.
        let prod = s.matmul(&s.conj_transpose());
        let dev = prod.sub(&ComplexMatrix::identity(n)).max_abs();
        if dev > 1e-10 {
            return Err(Error::invalid(format!(
                "junction network must be unitary (max |S S^H - I| = {dev:.2e})"
            )));
        }
        let sym_dev = s.sub(&s.transpose()).max_abs();
        if sym_dev > 1e-10 {
            return Err(Error::invalid(format!(
                "junction network must be reciprocal (max |S - S^t| = {sym_dev:.2e})"
            )));
        }
        let independent_ports: Vec<usize> = (0..n).filter(|p| !seen[*p]).collect();
        Ok(NPortCoupling {
            s,
            coupled_ports,
            independent_ports,
            kappa_vec,
            phi0_vec,
        })
    }

    /// Two matched through-lines, one per coupling, with the resonator's
    /// coupling plane at electrical length theta_i from the external end.
    /// Ports 0,1 face the resonator; ports 2,3 are the external ends.
    pub fn doubly_loaded(kappa1: f64, kappa2: f64, theta1: f64, theta2: f64) -> Result<Self> {
        let mut s = ComplexMatrix::zeros(4, 4);
        let l1 = C64::from_polar(1.0, -theta1);
        let l2 = C64::from_polar(1.0, -theta2);
        s.set(0, 2, l1);
        s.set(2, 0, l1);
        s.set(1, 3, l2);
        s.set(3, 1, l2);
        NPortCoupling::new(s, vec![0, 1], vec![kappa1, kappa2], vec![0.0, 0.0])
    }

    /// Symmetric three-way junction with the resonator on port 0 and the
    /// through line on ports 1, 2 (side-coupled resonator).
    pub fn tee_junction(kappa: f64) -> Result<Self> {
        let d = C64::new(-1.0 / 3.0, 0.0);
        let o = C64::new(2.0 / 3.0, 0.0);
        let s = ComplexMatrix::from_rows(&[vec![d, o, o], vec![o, d, o], vec![o, o, d]]);
        NPortCoupling::new(s, vec![0], vec![kappa], vec![0.0])
    }

    pub fn network(&self) -> &ComplexMatrix {
        &self.s
    }

    pub fn coupled_ports(&self) -> &[usize] {
        &self.coupled_ports
    }

    pub fn independent_ports(&self) -> &[usize] {
        &self.independent_ports
    }

    pub fn kappa_vec(&self) -> &[f64] {
        &self.kappa_vec
    }

    pub fn phi0_vec(&self) -> &[f64] {
        &self.phi0_vec
    }

    pub fn kappa_total(&self) -> f64 {
        self.kappa_vec.iter().sum()
    }

    fn block(&self, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                m.set(ri, ci, self.s.at(r, c));
            }
        }
        m
    }

    fn s_cc(&self) -> ComplexMatrix {
        self.block(&self.coupled_ports, &self.coupled_ports)
    }

    fn s_ci(&self) -> ComplexMatrix {
        self.block(&self.coupled_ports, &self.independent_ports)
    }

    fn s_ic(&self) -> ComplexMatrix {
        self.block(&self.independent_ports, &self.coupled_ports)
    }

    fn s_ii(&self) -> ComplexMatrix {
        self.block(&self.independent_ports, &self.independent_ports)
    }

    /// Reference-plane phase factors e^{-j*phi0_i}.
    fn x_diag(&self) -> Vec<C64> {
        self.phi0_vec
            .iter()
            .map(|p| C64::from_polar(1.0, -p))
            .collect()
    }

    /// s_CC * diag(e^{-j phi0}).
    fn s_cc_x(&self) -> ComplexMatrix {
        let mut m = self.s_cc();
        let x = self.x_diag();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.at(r, c) * x[c];
                m.set(r, c, v);
            }
        }
        m
    }

    /// (I - s_CC X)^{-1}, the multiple-bounce factor of the junction.
    fn junction_inverse(&self) -> Result<ComplexMatrix> {
        let m = self.coupled_ports.len();
        ComplexMatrix::identity(m)
            .sub(&self.s_cc_x())
            .inverse()
            .map_err(|_| Error::SingularJunction)
    }
}

/// Equation of motion of a resonator coupled to M ports of a junction
/// network, with all coupled-port reflections eliminated:
///
/// da/dt = j*w0*a - (kappa_tot/2)*a
///         + sqrt(kappa)^t (I - s_CC X)^{-1} (s_CI s_I+ - s_CC X sqrt(kappa) a),
///
/// where X = diag(e^{-j phi0}) and kappa_tot = sum(kappa_i). The drive
/// vector `s_i_in` is ordered like `net.independent_ports()`.
pub fn nport_eom_rhs(a: C64, s_i_in: &[C64], net: &NPortCoupling, omega0: f64) -> Result<C64> {
    let m = net.coupled_ports.len();
    let p = net.independent_ports.len();
    if s_i_in.len() != p {
        return Err(Error::invalid(format!(
            "drive vector has {} entries but the network has {p} independent ports",
            s_i_in.len()
        )));
    }
    let mut rhs = C64::new(0.0, omega0) * a - 0.5 * net.kappa_total() * a;
    if m == 0 {
        return Ok(rhs);
    }
    let sqrt_k: Vec<C64> = net
        .kappa_vec
        .iter()
        .map(|k| C64::new(k.sqrt(), 0.0))
        .collect();
    // Wave arriving at the coupling planes before multiple-bounce correction:
    // s_CI s_I+ - s_CC X sqrt(kappa) a.
    let drive = net.s_ci().mul_vec(s_i_in);
    let scx_ka = net
        .s_cc_x()
        .mul_vec(&sqrt_k.iter().map(|sk| sk * a).collect::<Vec<_>>());
    let vec: Vec<C64> = drive
        .iter()
        .zip(scx_ka.iter())
        .map(|(d, s)| d - s)
        .collect();
    let m_eye = ComplexMatrix::identity(m).sub(&net.s_cc_x());
    let y = m_eye.solve(&vec).map_err(|_| Error::SingularJunction)?;
    for (sk, yi) in sqrt_k.iter().zip(y.iter()) {
        rhs += sk * yi;
    }
    Ok(rhs)
}

/// Steady-state scattering of the loaded junction, reduced to its
/// independent ports.
///
/// The response at angular frequency w is
/// S(w) = T + emission * drive^t / (j(w - w0) + gamma):
/// `background` T is the response with the resonator absent (coupling planes
/// reflecting with their phi0 phases), `emission` maps the mode amplitude to
/// the outgoing waves, `drive` maps the incoming waves to the mode drive, and
/// `gamma` is the (generally complex) loaded decay constant.
#[derive(Debug, Clone)]
pub struct ReducedScattering {
    omega0: f64,
    background: ComplexMatrix,
    emission: Vec<C64>,
    drive: Vec<C64>,
    gamma: C64,
    resonant: bool,
}

impl ReducedScattering {
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Response of the independent ports with the resonator absent.
    pub fn background(&self) -> &ComplexMatrix {
        &self.background
    }

    /// Outgoing-wave column per unit mode amplitude.
    pub fn emission(&self) -> &[C64] {
        &self.emission
    }

    /// Mode-drive row per unit incoming wave.
    pub fn drive(&self) -> &[C64] {
        &self.drive
    }

    /// Loaded decay constant: steady state solves (j(w-w0) + gamma) a = drive . s_in.
    pub fn gamma(&self) -> C64 {
        self.gamma
    }

    /// Full S-matrix over the independent ports at angular frequency `omega`.
    pub fn s_matrix(&self, omega: f64) -> ComplexMatrix {
        let mut s = self.background.clone();
        if !self.resonant {
            return s;
        }
        let denom = C64::new(0.0, omega - self.omega0) + self.gamma;
        for r in 0..s.rows() {
            for c in 0..s.cols() {
                s.add_at(r, c, self.emission[r] * self.drive[c] / denom);
            }
        }
        s
    }
}

/// Reduce a loaded junction network to the steady-state scattering object
/// over its independent ports (see [`ReducedScattering`]).
pub fn nport_reduced_scattering(net: &NPortCoupling, omega0: f64) -> Result<ReducedScattering> {
    let m = net.coupled_ports.len();
    let p = net.independent_ports.len();
    if m == 0 {
        // Degenerate case: nothing couples; the bare network is the answer.
        return Ok(ReducedScattering {
            omega0,
            background: net.s_ii(),
            emission: vec![C64::new(0.0, 0.0); p],
            drive: vec![C64::new(0.0, 0.0); p],
            gamma: C64::new(0.0, 0.0),
            resonant: false,
        });
    }
    let inv = net.junction_inverse()?;
    let x = net.x_diag();
    let sqrt_k: Vec<C64> = net
        .kappa_vec
        .iter()
        .map(|k| C64::new(k.sqrt(), 0.0))
        .collect();

    // s_IC X (I - s_CC X)^{-1}: common left factor of background and emission.
    let mut s_ic_x = net.s_ic();
    for r in 0..s_ic_x.rows() {
        for c in 0..s_ic_x.cols() {
            let v = s_ic_x.at(r, c) * x[c];
            s_ic_x.set(r, c, v);
        }
    }
    let left = s_ic_x.matmul(&inv);

    let background = net.s_ii().add(&left.matmul(&net.s_ci()));
    let emission: Vec<C64> = left.mul_vec(&sqrt_k).into_iter().map(|v| -v).collect();

    // drive^t = sqrt(kappa)^t (I - s_CC X)^{-1} s_CI.
    let inv_sci = inv.matmul(&net.s_ci());
    let drive: Vec<C64> = (0..p)
        .map(|c| (0..m).map(|r| sqrt_k[r] * inv_sci.at(r, c)).sum())
        .collect();

    // gamma = sqrt(kappa)^t (I - s_CC X)^{-1} sqrt(kappa) - kappa_tot/2.
    let inv_k = inv.mul_vec(&sqrt_k);
    let mut gamma: C64 = sqrt_k.iter().zip(inv_k.iter()).map(|(a, b)| a * b).sum();
    gamma -= 0.5 * net.kappa_total();

    let resonant = net.kappa_total() > 0.0;
    Ok(ReducedScattering {
        omega0,
        background,
        emission,
        drive,
        gamma,
        resonant,
    })
}

/// Closed-form transmission between the external ends of two lines loading
/// one resonator:
/// S43 = -sqrt(kappa1*kappa2) e^{-j(theta1+theta2)} / (j(w-w0) + (kappa1+kappa2)/2).
pub fn doubly_loaded_s43(
    omega: f64,
    omega0: f64,
    kappa1: f64,
    kappa2: f64,
    theta1: f64,
    theta2: f64,
) -> Result<C64> {
    if kappa1 < 0.0 {
        return Err(Error::CouplingOutOfRange { value: kappa1 });
    }
    if kappa2 < 0.0 {
        return Err(Error::CouplingOutOfRange { value: kappa2 });
    }
    if kappa1 + kappa2 == 0.0 {
        return Err(Error::ZeroKappa);
    }
    let num = -(kappa1 * kappa2).sqrt() * C64::from_polar(1.0, -(theta1 + theta2));
    let den = C64::new(0.5 * (kappa1 + kappa2), omega - omega0);
    Ok(num / den)
}

/// Closed-form through transmission past a side-coupled resonator on a
/// symmetric three-way junction:
/// S32 = j(w-w0) / (j(w-w0) + kappa/4).
pub fn tjunction_s32(omega: f64, omega0: f64, kappa: f64) -> Result<C64> {
    if kappa < 0.0 {
        return Err(Error::CouplingOutOfRange { value: kappa });
    }
    if kappa == 0.0 {
        return Err(Error::ZeroKappa);
    }
    let delta = omega - omega0;
    Ok(C64::new(0.0, delta) / C64::new(0.25 * kappa, delta))
}
