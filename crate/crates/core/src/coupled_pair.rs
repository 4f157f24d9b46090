//! Two lumped LC resonators coupled by mutual inductance and mutual
//! capacitance: exact matrix equation of motion, rotating-wave form,
//! normal-mode frequencies, coupling extraction from a measured splitting,
//! and the symmetric (geometric-mean) variant of the coupled equations.

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64};

/// Element values of the coupled pair. Mutual terms may be negative;
/// their normalized magnitudes must stay below 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledLCParams {
    l1: f64,
    l2: f64,
    lm: f64,
    c1: f64,
    c2: f64,
    cm: f64,
}

impl CoupledLCParams {
    pub fn new(l1: f64, l2: f64, lm: f64, c1: f64, c2: f64, cm: f64) -> Result<Self> {
        for (name, v) in [("L1", l1), ("L2", l2), ("C1", c1), ("C2", c2)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        let zl = lm / (l1 * l2).sqrt();
        if !zl.is_finite() || zl.abs() >= 1.0 {
            return Err(Error::CouplingOutOfRange { value: zl });
        }
        let zc = cm / (c1 * c2).sqrt();
        if !zc.is_finite() || zc.abs() >= 1.0 {
            return Err(Error::CouplingOutOfRange { value: zc });
        }
        Ok(CoupledLCParams {
            l1,
            l2,
            lm,
            c1,
            c2,
            cm,
        })
    }

    /// Build element values realizing the requested bare frequencies and
    /// normalized couplings (inductances fixed at 1 nH).
    pub fn from_couplings(omega01: f64, omega02: f64, zeta_c: f64, zeta_l: f64) -> Result<Self> {
        if !(omega01 > 0.0) || !(omega02 > 0.0) {
            return Err(Error::invalid("bare frequencies must be positive"));
        }
        let l1 = 1e-9;
        let l2 = 1e-9;
        let c1 = 1.0 / (omega01 * omega01 * l1);
        let c2 = 1.0 / (omega02 * omega02 * l2);
        let lm = zeta_l * (l1 * l2).sqrt();
        let cm = zeta_c * (c1 * c2).sqrt();
        CoupledLCParams::new(l1, l2, lm, c1, c2, cm)
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn lm(&self) -> f64 {
        self.lm
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn cm(&self) -> f64 {
        self.cm
    }

    /// Normalized inductive coupling Lm/sqrt(L1 L2).
    pub fn zeta_l(&self) -> f64 {
        self.lm / (self.l1 * self.l2).sqrt()
    }

    /// Normalized capacitive coupling Cm/sqrt(C1 C2).
    pub fn zeta_c(&self) -> f64 {
        self.cm / (self.c1 * self.c2).sqrt()
    }

    /// Bare resonance of resonator 1, rad/s.
    pub fn omega01(&self) -> f64 {
        1.0 / (self.l1 * self.c1).sqrt()
    }

    /// Bare resonance of resonator 2, rad/s.
    pub fn omega02(&self) -> f64 {
        1.0 / (self.l2 * self.c2).sqrt()
    }
}

/// Mode amplitudes of the pair at one instant. Only the positive-frequency
/// components are stored; the negative ones are their conjugates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledModeState {
    pub a1: C64,
    pub a2: C64,
    pub t: f64,
}

impl CoupledModeState {
    pub fn new(a1: C64, a2: C64) -> Self {
        CoupledModeState { a1, a2, t: 0.0 }
    }
}

/// The four dimensionless constants of the exact coupled equations:
///
/// k1 = (2 - (zc^2 + zl^2)) / D, k2 = (zc^2 - zl^2) / D,
/// k3 = (1 + zc*zl)(zc - zl) / D, k4 = (1 - zc*zl)(zc + zl) / D,
/// with D = 2 (1 - zc^2)(1 - zl^2).
pub fn coupling_constants(p: &CoupledLCParams) -> (f64, f64, f64, f64) {
    let zc = p.zeta_c();
    let zl = p.zeta_l();
    let d = 2.0 * (1.0 - zc * zc) * (1.0 - zl * zl);
    let k1 = (2.0 - (zc * zc + zl * zl)) / d;
    let k2 = (zc * zc - zl * zl) / d;
    let k3 = (1.0 + zc * zl) * (zc - zl) / d;
    let k4 = (1.0 - zc * zl) * (zc + zl) / d;
    (k1, k2, k3, k4)
}

/// Exact 4x4 system matrix M of the coupled pair, acting on the
/// frequency-weighted state:
///
/// d/dt (a1+, a1-, a2+, a2-)^t = M . (j w01 a1+, j w01 a1-, j w02 a2+, j w02 a2-)^t
///
/// M is block-structured [[U0, Ug], [Ug, U0]] with
/// U0 = [[k1, -k2], [k2, -k1]] and Ug = [[k3, -k4], [k4, -k3]].
pub fn exact_system_matrix(p: &CoupledLCParams) -> ComplexMatrix {
    let (k1, k2, k3, k4) = coupling_constants(p);
    let r = |x: f64| C64::new(x, 0.0);
    ComplexMatrix::from_rows(&[
        vec![r(k1), r(-k2), r(k3), r(-k4)],
        vec![r(k2), r(-k1), r(k4), r(-k3)],
        vec![r(k3), r(-k4), r(k1), r(-k2)],
        vec![r(k4), r(-k3), r(k2), r(-k1)],
    ])
}

/// Exact time derivatives (da1/dt, da2/dt) with the conjugate components
/// substituted, evaluated through [`exact_system_matrix`].
pub fn exact_rhs(state: &CoupledModeState, p: &CoupledLCParams) -> (C64, C64) {
    let m = exact_system_matrix(p);
    let w1 = C64::new(0.0, p.omega01());
    let w2 = C64::new(0.0, p.omega02());
    let v = [
        w1 * state.a1,
        w1 * state.a1.conj(),
        w2 * state.a2,
        w2 * state.a2.conj(),
    ];
    let out = m.mul_vec(&v);
    (out[0], out[2])
}

/// Rotating-wave derivatives: each resonator rotates at its own frequency
/// and couples to the other with strength w0_other * (zc - zl)/2:
///
/// da1/dt = j w01 a1 + j w02 (zc - zl)/2 a2,
/// da2/dt = j w02 a2 + j w01 (zc - zl)/2 a1.
pub fn rwa_rhs(state: &CoupledModeState, p: &CoupledLCParams) -> (C64, C64) {
    let g = 0.5 * (p.zeta_c() - p.zeta_l());
    let w1 = p.omega01();
    let w2 = p.omega02();
    (
        C64::new(0.0, w1) * state.a1 + C64::new(0.0, w2 * g) * state.a2,
        C64::new(0.0, w2) * state.a2 + C64::new(0.0, w1 * g) * state.a1,
    )
}

/// Symmetric variant: both coupling terms carry the geometric mean
/// sqrt(w01 w02) (zc - zl)/2, so the 2x2 generator is exactly symmetric.
pub fn symmetric_form_rhs(state: &CoupledModeState, p: &CoupledLCParams) -> (C64, C64) {
    let g = 0.5 * (p.zeta_c() - p.zeta_l()) * (p.omega01() * p.omega02()).sqrt();
    (
        C64::new(0.0, p.omega01()) * state.a1 + C64::new(0.0, g) * state.a2,
        C64::new(0.0, p.omega02()) * state.a2 + C64::new(0.0, g) * state.a1,
    )
}

/// Total energy of the pair including the mutual (cross) terms:
///
/// W = |a1|^2 + |a2|^2 - 2 zc Re(a1) Re(a2) + 2 zl Im(a1) Im(a2).
///
/// Conserved exactly along [`exact_rhs`] trajectories; |a1|^2 + |a2|^2
/// alone is not.
pub fn total_energy(state: &CoupledModeState, p: &CoupledLCParams) -> f64 {
    state.a1.norm_sqr() + state.a2.norm_sqr() - 2.0 * p.zeta_c() * state.a1.re * state.a2.re
        + 2.0 * p.zeta_l() * state.a1.im * state.a2.im
}

/// Normal-mode angular frequencies (lower, upper):
///
/// w_{1,2} = (w01 + w02)/2 -/+ sqrt((w01 - w02)^2 + (zc - zl)^2 w01 w02) / 2.
pub fn eigenfrequencies(p: &CoupledLCParams) -> (f64, f64) {
    let w1 = p.omega01();
    let w2 = p.omega02();
    let dz = p.zeta_c() - p.zeta_l();
    let split = ((w1 - w2).powi(2) + dz * dz * w1 * w2).sqrt();
    let mean = 0.5 * (w1 + w2);
    (mean - 0.5 * split, mean + 0.5 * split)
}

/// Extract |zc - zl| from measured normal-mode frequencies (w1, w2) given
/// the bare frequencies (w01, w02):
///
/// |zc - zl| = (w02/w01 + w01/w02)/2 * sqrt(A^2 - B^2),
/// A = (w2^2 - w1^2)/(w2^2 + w1^2), B = (w02^2 - w01^2)/(w02^2 + w01^2).
///
/// For identical bare frequencies this reduces to the familiar
/// (w2^2 - w1^2)/(w2^2 + w1^2). Fails when the observed splitting is
/// smaller than the bare detuning (negative radicand).
pub fn zeta_from_eigenfreqs(w01: f64, w02: f64, w1: f64, w2: f64) -> Result<f64> {
    for (name, v) in [("w01", w01), ("w02", w02), ("w1", w1), ("w2", w2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let a = (w2 * w2 - w1 * w1) / (w2 * w2 + w1 * w1);
    let b = (w02 * w02 - w01 * w01) / (w02 * w02 + w01 * w01);
    let radicand = a * a - b * b;
    if radicand < 0.0 {
        return Err(Error::InvalidSplitting);
    }
    Ok(0.5 * (w02 / w01 + w01 / w02) * radicand.sqrt())
}
