//! Uniform symmetric coupled transmission lines: even/odd modal
//! decomposition, 4-port scattering, ideal backward/forward directional
//! couplers, even/odd S-matrix splitting, and the weak-coupling
//! interference solution.
//!
//! Port convention for all 4-ports here: ports 0 and 1 are the left ends of
//! lines 1 and 2, ports 2 and 3 the right ends.

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64};

/// Per-unit-length element values of a symmetric coupled pair of lines,
/// plus the physical length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledLineParams {
    l_self: f64,
    l_mut: f64,
    c_self: f64,
    c_mut: f64,
    length: f64,
}

impl CoupledLineParams {
    pub fn new(l_self: f64, l_mut: f64, c_self: f64, c_mut: f64, length: f64) -> Result<Self> {
        if !(l_self > 0.0) || !l_self.is_finite() {
            return Err(Error::invalid(format!(
                "self inductance density must be positive, got {l_self}"
            )));
        }
        if !(c_self > 0.0) || !c_self.is_finite() {
            return Err(Error::invalid(format!(
                "self capacitance density must be positive, got {c_self}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::invalid(format!(
                "length must be positive, got {length}"
            )));
        }
        let zl = l_mut / l_self;
        if !zl.is_finite() || zl.abs() >= 1.0 {
            return Err(Error::CouplingOutOfRange { value: zl });
        }
        let zc = c_mut / c_self;
        if !zc.is_finite() || zc.abs() >= 1.0 {
            return Err(Error::CouplingOutOfRange { value: zc });
        }
        Ok(CoupledLineParams {
            l_self,
            l_mut,
            c_self,
            c_mut,
            length,
        })
    }

    pub fn l_self(&self) -> f64 {
        self.l_self
    }

    pub fn l_mut(&self) -> f64 {
        self.l_mut
    }

    pub fn c_self(&self) -> f64 {
        self.c_self
    }

    pub fn c_mut(&self) -> f64 {
        self.c_mut
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Normalized inductive coupling l_mut/l_self.
    pub fn zeta_l(&self) -> f64 {
        self.l_mut / self.l_self
    }

    /// Normalized capacitive coupling c_mut/c_self.
    pub fn zeta_c(&self) -> f64 {
        self.c_mut / self.c_self
    }

    /// Uncoupled propagation constant omega*sqrt(l*c), rad/m.
    pub fn beta(&self, omega: f64) -> f64 {
        omega * (self.l_self * self.c_self).sqrt()
    }

    /// Uncoupled characteristic impedance sqrt(l/c), ohms.
    pub fn z0(&self) -> f64 {
        (self.l_self / self.c_self).sqrt()
    }
}

/// Even/odd ("+"/"-") mode propagation constants and impedances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalParams {
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub z_plus: f64,
    pub z_minus: f64,
}

impl ModalParams {
    /// Voltage coupling coefficient (Z+ - Z-)/(Z+ + Z-).
    pub fn zeta(&self) -> f64 {
        (self.z_plus - self.z_minus) / (self.z_plus + self.z_minus)
    }
}

/// Modal decomposition of the coupled pair at angular frequency `omega`:
///
/// beta_pm = beta*sqrt((1 -/+ zc)(1 +/- zl)),
/// Z_pm    = Z0*sqrt((1 +/- zl)/(1 -/+ zc)).
pub fn modal_from_lc(p: &CoupledLineParams, omega: f64) -> ModalParams {
    let beta = p.beta(omega);
    let z0 = p.z0();
    let (zc, zl) = (p.zeta_c(), p.zeta_l());
    ModalParams {
        beta_plus: beta * ((1.0 - zc) * (1.0 + zl)).sqrt(),
        beta_minus: beta * ((1.0 + zc) * (1.0 - zl)).sqrt(),
        z_plus: z0 * ((1.0 + zl) / (1.0 - zc)).sqrt(),
        z_minus: z0 * ((1.0 - zl) / (1.0 + zc)).sqrt(),
    }
}

/// Exact inverse of [`modal_from_lc`]:
///
/// w*l_self = (b+ Z+ + b- Z-)/2,  w*l_mut = (b+ Z+ - b- Z-)/2,
/// w*c_self = (b+/Z+ + b-/Z-)/2,  w*c_mut = (b-/Z- - b+/Z+)/2.
pub fn lc_from_modal(m: &ModalParams, omega: f64, length: f64) -> Result<CoupledLineParams> {
    for (name, v) in [
        ("beta_plus", m.beta_plus),
        ("beta_minus", m.beta_minus),
        ("z_plus", m.z_plus),
        ("z_minus", m.z_minus),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    if !(omega > 0.0) {
        return Err(Error::invalid("omega must be positive"));
    }
    let l_self = (m.beta_plus * m.z_plus + m.beta_minus * m.z_minus) / (2.0 * omega);
    let l_mut = (m.beta_plus * m.z_plus - m.beta_minus * m.z_minus) / (2.0 * omega);
    let c_self = (m.beta_plus / m.z_plus + m.beta_minus / m.z_minus) / (2.0 * omega);
    let c_mut = (m.beta_minus / m.z_minus - m.beta_plus / m.z_plus) / (2.0 * omega);
    CoupledLineParams::new(l_self, l_mut, c_self, c_mut, length)
}

/// 2-port scattering of one modal line section (impedance `z`, electrical
/// angle `theta`) referenced to `z0_ref`.
fn mode_two_port(z: f64, theta: f64, z0_ref: f64) -> Result<(C64, C64)> {
    let gamma = (z - z0_ref) / (z + z0_ref);
    let e1 = C64::from_polar(1.0, -theta);
    let e2 = C64::from_polar(1.0, -2.0 * theta);
    let den = C64::new(1.0, 0.0) - gamma * gamma * e2;
    if den.norm() < 1e-12 {
        return Err(Error::SingularResponse);
    }
    let s11 = gamma * (C64::new(1.0, 0.0) - e2) / den;
    let s21 = (1.0 - gamma * gamma) * e1 / den;
    Ok((s11, s21))
}

/// Power-wave S-matrix of the 4-port coupled-line section at angular
/// frequency `omega`, referenced to `z0_ref` at every port.
///
/// Computed in the even/odd basis where the structure is two independent
/// 2-ports, then reassembled; unitary and reciprocal for any parameters.
pub fn four_port_smatrix(p: &CoupledLineParams, omega: f64, z0_ref: f64) -> Result<ComplexMatrix> {
    if !(z0_ref > 0.0) || !z0_ref.is_finite() {
        return Err(Error::invalid("reference impedance must be positive"));
    }
    let m = modal_from_lc(p, omega);
    let (s11_p, s21_p) = mode_two_port(m.z_plus, m.beta_plus * p.length(), z0_ref)?;
    let (s11_m, s21_m) = mode_two_port(m.z_minus, m.beta_minus * p.length(), z0_ref)?;
    Ok(assemble_four_port(
        0.5 * (s11_p + s11_m),
        0.5 * (s11_p - s11_m),
        0.5 * (s21_p + s21_m),
        0.5 * (s21_p - s21_m),
    ))
}

/// Symmetric 4-port from its four distinct entries: reflection `s11`,
/// same-side line-to-line coupling `s21`, through `s31`, diagonal coupling
/// `s41`.
fn assemble_four_port(s11: C64, s21: C64, s31: C64, s41: C64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![s11, s21, s31, s41],
        vec![s21, s11, s41, s31],
        vec![s31, s41, s11, s21],
        vec![s41, s31, s21, s11],
    ])
}

/// Ideal backward coupler (equal modal propagation constants, modal
/// impedances satisfying Z+ Z- = Z0^2) in closed form. `theta` is the modal
/// electrical angle of the section and `zeta` the voltage coupling
/// coefficient (Z+ - Z-)/(Z+ + Z-):
///
/// S21 = j zeta sin(theta) / (sqrt(1-zeta^2) cos(theta) + j sin(theta)),
/// S31 = sqrt(1-zeta^2)    / (sqrt(1-zeta^2) cos(theta) + j sin(theta)),
/// S11 = S41 = 0.
pub fn backward_coupler_smatrix(zeta: f64, theta: f64) -> Result<ComplexMatrix> {
    if !zeta.is_finite() || zeta.abs() >= 1.0 {
        return Err(Error::CouplingOutOfRange { value: zeta });
    }
    let root = (1.0 - zeta * zeta).sqrt();
    let den = C64::new(root * theta.cos(), theta.sin());
    let s21 = C64::new(0.0, zeta * theta.sin()) / den;
    let s31 = C64::new(root, 0.0) / den;
    Ok(assemble_four_port(
        C64::new(0.0, 0.0),
        s21,
        s31,
        C64::new(0.0, 0.0),
    ))
}

/// Result of splitting a pair of even/odd 2-port responses into the
/// same-line block `s_a`, the line-to-line block `s_b`, and the forward /
/// reverse wave-coupling scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenOddSplit {
    /// Same-line 2x2 block (S+ + S-)/2.
    pub s_a: ComplexMatrix,
    /// Line-to-line 2x2 block (S+ - S-)/2.
    pub s_b: ComplexMatrix,
    /// Forward-wave coupling (S21+ - S21-)/2 = far-end diagonal coupling.
    pub forward_coupling: C64,
    /// Reverse-wave coupling (S22+ - S22-)/2 = same-side coupling.
    pub reverse_coupling: C64,
}

/// Split even/odd 2-port S-matrices into same-line and line-to-line halves.
///
/// Both inputs must be symmetric (reciprocal) 2x2 matrices. The returned
/// blocks reassemble into the full 4-port as
/// [[A, B], [B, A]] over (left ends, right ends).
pub fn even_odd_split(s_even: &ComplexMatrix, s_odd: &ComplexMatrix) -> Result<EvenOddSplit> {
    for (name, s) in [("even", s_even), ("odd", s_odd)] {
        if s.rows() != 2 || s.cols() != 2 {
            return Err(Error::invalid(format!("{name}-mode S-matrix must be 2x2")));
        }
        if (s.at(0, 1) - s.at(1, 0)).norm() > 1e-10 {
            return Err(Error::invalid(format!(
                "{name}-mode S-matrix must be symmetric"
            )));
        }
    }
    let s_a = s_even.add(s_odd).scale(C64::new(0.5, 0.0));
    let s_b = s_even.sub(s_odd).scale(C64::new(0.5, 0.0));
    Ok(EvenOddSplit {
        forward_coupling: s_b.at(1, 0),
        reverse_coupling: s_b.at(1, 1),
        s_a,
        s_b,
    })
}

/// Interference solution for two weakly coupled lines with per-length
/// propagation constants `beta1`, `beta2` and coupling rate `lambda`,
/// launched as (V1, V2) = (1, 0) at z = 0:
///
/// d = beta1 - beta2, D = sqrt(d^2 + 4 lambda^2),
/// beta_{s,f} = (beta1 + beta2)/2 +/- D/2,
/// V1 = (1/2 + d/2D) e^{-j beta_s z} + (1/2 - d/2D) e^{-j beta_f z},
/// V2 = (lambda/D) (e^{-j beta_s z} - e^{-j beta_f z}).
///
/// Conserves |V1|^2 + |V2|^2 = 1 exactly for all arguments.
pub fn weak_coupling_propagate(beta1: f64, beta2: f64, lambda: f64, z: f64) -> (C64, C64) {
    let d = beta1 - beta2;
    let big_d = (d * d + 4.0 * lambda * lambda).sqrt();
    if big_d == 0.0 {
        // No detuning and no coupling: plain propagation on line 1.
        return (C64::from_polar(1.0, -beta1 * z), C64::new(0.0, 0.0));
    }
    let mean = 0.5 * (beta1 + beta2);
    let slow = C64::from_polar(1.0, -(mean + 0.5 * big_d) * z);
    let fast = C64::from_polar(1.0, -(mean - 0.5 * big_d) * z);
    let w = 0.5 * d / big_d;
    let v1 = (0.5 + w) * slow + (0.5 - w) * fast;
    let v2 = (lambda / big_d) * (slow - fast);
    (v1, v2)
}
