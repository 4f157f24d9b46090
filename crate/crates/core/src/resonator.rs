//! Travelling-mode description of a single lumped LC resonator.
//!
//! The resonator state is the complex mode amplitude `a` (units sqrt(J))
//! built from the capacitor voltage and inductor current; its magnitude
//! squared is the stored energy. Losses enter through a series resistance
//! on the inductor branch and a shunt conductance across the capacitor.
//! The negative-frequency component is always the conjugate of `a` and is
//! never stored.

use crate::error::{Error, Result};
use crate::numerics::{rk4_path, AxisUnit, ComplexTrace, C64};
use std::f64::consts::PI;

/// Lumped resonator elements: inductance, capacitance, series resistance
/// (inductor branch) and shunt conductance (capacitor branch).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorParams {
    l: f64,
    c: f64,
    r: f64,
    g: f64,
}

impl ResonatorParams {
    /// Lossless resonator.
    pub fn new(l: f64, c: f64) -> Result<Self> {
        Self::with_loss(l, c, 0.0, 0.0)
    }

    pub fn with_loss(l: f64, c: f64, r: f64, g: f64) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::invalid(format!(
                "inductance must be positive, got {l}"
            )));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::invalid(format!(
                "capacitance must be positive, got {c}"
            )));
        }
        if r < 0.0 || !r.is_finite() {
            return Err(Error::invalid(format!(
                "series resistance must be >= 0, got {r}"
            )));
        }
        if g < 0.0 || !g.is_finite() {
            return Err(Error::invalid(format!(
                "shunt conductance must be >= 0, got {g}"
            )));
        }
        Ok(ResonatorParams { l, c, r, g })
    }

    pub fn inductance(&self) -> f64 {
        self.l
    }

    pub fn capacitance(&self) -> f64 {
        self.c
    }

    pub fn series_resistance(&self) -> f64 {
        self.r
    }

    pub fn shunt_conductance(&self) -> f64 {
        self.g
    }

    /// Resonance angular frequency 1/sqrt(LC), rad/s.
    pub fn omega0(&self) -> f64 {
        1.0 / (self.l * self.c).sqrt()
    }

    /// Characteristic impedance sqrt(L/C), ohms.
    pub fn impedance(&self) -> f64 {
        (self.l / self.c).sqrt()
    }

    /// Energy decay rate G/C + R/L, rad/s.
    pub fn kappa(&self) -> f64 {
        self.g / self.c + self.r / self.l
    }
}

/// Positive-frequency mode amplitude from capacitor voltage and inductor
/// current: a = (v + jZi)/sqrt(2 w0 Z).
pub fn mode_from_vi(v: f64, i: f64, p: &ResonatorParams) -> C64 {
    let z = p.impedance();
    let norm = (2.0 * p.omega0() * z).sqrt();
    C64::new(v, z * i) / norm
}

/// Inverse of [`mode_from_vi`]: recover (v, i) from the mode amplitude.
pub fn vi_from_mode(a: C64, p: &ResonatorParams) -> (f64, f64) {
    let z = p.impedance();
    let norm = (2.0 * p.omega0() * z).sqrt();
    (norm * a.re, norm * a.im / z)
}

/// Stored energy |a|^2, joules.
pub fn energy(a: C64) -> f64 {
    a.norm_sqr()
}

/// Exact time derivative of the mode amplitude, with the conjugate
/// component substituted:
/// da/dt = j*w0*a - (G/C + R/L)/2 * a - (G/C - R/L)/2 * conj(a).
///
/// When the two loss rates G/C and R/L are equal the conjugate coupling
/// vanishes and the motion decouples.
pub fn eom_exact_rhs(a: C64, p: &ResonatorParams) -> C64 {
    let gc = p.g / p.c;
    let rl = p.r / p.l;
    C64::new(0.0, p.omega0()) * a - 0.5 * (gc + rl) * a - 0.5 * (gc - rl) * a.conj()
}

/// Rotating-wave time derivative: da/dt = (j*w0 - kappa/2) * a.
pub fn eom_rwa_rhs(a: C64, p: &ResonatorParams) -> C64 {
    (C64::new(0.0, p.omega0()) - 0.5 * p.kappa()) * a
}

/// Which equation of motion [`integrate`] advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EomKind {
    /// Full dynamics including the conjugate coupling (fast energy ripple).
    Exact,
    /// Rotating-wave approximation (pure exponential envelope).
    Rwa,
}

/// Integrate the free resonator with fixed-step RK4 and return the sampled
/// trajectory a(t).
///
/// The step must resolve the oscillation: `dt * w0 <= 2*pi/50`.
pub fn integrate(
    kind: EomKind,
    a0: C64,
    t_span: (f64, f64),
    dt: f64,
    p: &ResonatorParams,
) -> Result<ComplexTrace> {
    let omega0 = p.omega0();
    let limit = 2.0 * PI / 50.0 / omega0;
    if dt * omega0 > 2.0 * PI / 50.0 {
        return Err(Error::StepTooLarge { dt, limit });
    }
    if !(t_span.1 > t_span.0) || !t_span.0.is_finite() || !t_span.1.is_finite() {
        return Err(Error::invalid("time span must be finite with t1 > t0"));
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    rk4_path(
        &[a0],
        t_span,
        dt,
        |_, y, out| {
            out[0] = match kind {
                EomKind::Exact => eom_exact_rhs(y[0], p),
                EomKind::Rwa => eom_rwa_rhs(y[0], p),
            };
        },
        |t, y| {
            times.push(t);
            values.push(y[0]);
        },
    );
    ComplexTrace::new(times, values, AxisUnit::Seconds)
}
