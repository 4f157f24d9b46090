//! Distributed (transmission-line) resonators: power-wave mode amplitudes
//! for quarter- and half-wave sections, decay rates of coupler-fed
//! resonators in transmissive and reflective configurations, the
//! backward-coupler admittance stamp, and the weak-coupling closed forms
//! for the loaded resonant frequency and decay rate.

use crate::coupled_lines::CoupledLineParams;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64};
use std::f64::consts::PI;

/// Electrical length of the resonant section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResonatorKind {
    /// Shorted at one end, open at the other; length v/(4 f0).
    QuarterWave,
    /// Open (or shorted) at both ends; length v/(2 f0).
    HalfWave,
}

/// How the feed line connects to the coupler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedKind {
    /// Both coupler ports on the feed side terminate in matched lines.
    Transmissive,
    /// One coupler port feeds, the other ends in an open stub.
    Reflective,
}

/// A transmission-line resonator described by its fundamental frequency,
/// line impedance, and phase velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributedResonator {
    kind: ResonatorKind,
    f0: f64,
    z0_res: f64,
    v_ph: f64,
}

impl DistributedResonator {
    pub fn new(kind: ResonatorKind, f0: f64, z0_res: f64, v_ph: f64) -> Result<Self> {
        for (name, v) in [("f0", f0), ("z0_res", z0_res), ("v_ph", v_ph)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(DistributedResonator {
            kind,
            f0,
            z0_res,
            v_ph,
        })
    }

    pub fn kind(&self) -> ResonatorKind {
        self.kind
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn z0_res(&self) -> f64 {
        self.z0_res
    }

    pub fn v_ph(&self) -> f64 {
        self.v_ph
    }

    /// Physical length of the resonant section, m.
    pub fn length(&self) -> f64 {
        match self.kind {
            ResonatorKind::QuarterWave => self.v_ph / (4.0 * self.f0),
            ResonatorKind::HalfWave => self.v_ph / (2.0 * self.f0),
        }
    }
}

/// Placement of a backward coupler along a distributed resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerAttachment {
    coupler: CoupledLineParams,
    position_theta: f64,
    feed: FeedKind,
    ell_f: f64,
}

impl CouplerAttachment {
    /// `position_theta` is the electrical distance of the coupler from the
    /// open end (rad); `ell_f` is the open-stub feed length used by the
    /// reflective configuration (m, ignored for transmissive feeds).
    pub fn new(
        coupler: CoupledLineParams,
        position_theta: f64,
        feed: FeedKind,
        ell_f: f64,
        res: &DistributedResonator,
    ) -> Result<Self> {
        if res.kind() == ResonatorKind::QuarterWave
            && !(position_theta > 0.0 && position_theta < PI / 2.0)
        {
            return Err(Error::invalid(format!(
                "coupler position must lie strictly inside (0, pi/2) rad from the open end, \
                 got {position_theta}"
            )));
        }
        if coupler.length() > res.length() {
            return Err(Error::invalid(format!(
                "coupler length {} m exceeds resonator length {} m",
                coupler.length(),
                res.length()
            )));
        }
        if !(ell_f >= 0.0) || !ell_f.is_finite() {
            return Err(Error::invalid(format!(
                "feed stub length must be >= 0, got {ell_f}"
            )));
        }
        Ok(CouplerAttachment {
            coupler,
            position_theta,
            feed,
            ell_f,
        })
    }

    pub fn coupler(&self) -> &CoupledLineParams {
        &self.coupler
    }

    pub fn position_theta(&self) -> f64 {
        self.position_theta
    }

    pub fn feed(&self) -> FeedKind {
        self.feed
    }

    pub fn ell_f(&self) -> f64 {
        self.ell_f
    }

    /// Feed-stub length that maximizes the reflective decay rate when the
    /// coupler sits a distance `ell_1` from the shorted end: one resonator
    /// length beyond `ell_1`.
    pub fn maximal_feed_length(ell_1: f64, res: &DistributedResonator) -> f64 {
        ell_1 + res.length()
    }
}

/// Internal mode amplitude (sqrt-energy units) sustained by a traveling
/// power wave of magnitude `s_wave_mag` (sqrt-W) bouncing inside the
/// resonator: |a| = s/sqrt(2 f0) for a quarter-wave section and
/// |a| = 2 s/sqrt(2 f0) for a half-wave section.
pub fn mode_amp_from_powerwave(s_wave_mag: f64, res: &DistributedResonator) -> Result<f64> {
    if !(s_wave_mag >= 0.0) || !s_wave_mag.is_finite() {
        return Err(Error::invalid(format!(
            "power-wave magnitude must be >= 0, got {s_wave_mag}"
        )));
    }
    let base = s_wave_mag / (2.0 * res.f0()).sqrt();
    Ok(match res.kind() {
        ResonatorKind::QuarterWave => base,
        ResonatorKind::HalfWave => 2.0 * base,
    })
}

/// Energy decay rate (rad/s) of a resonator tapped by a backward coupler
/// whose two feed-side ports are matched (transmissive feed):
/// kappa = 4 f0 |S21|^2.
pub fn kappa_transmissive(s21_mag: f64, f0: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&s21_mag) {
        return Err(Error::invalid(format!(
            "coupler transfer magnitude must lie in [0, 1), got {s21_mag}"
        )));
    }
    if !(f0 > 0.0) || !f0.is_finite() {
        return Err(Error::invalid(format!("f0 must be positive, got {f0}")));
    }
    Ok(4.0 * f0 * s21_mag * s21_mag)
}

/// Energy decay rate (rad/s) of the reflective (open-stub feed)
/// configuration under the phase-matching condition theta2 - theta1 = pi/2:
/// kappa = 8 f0 |S21|^2, exactly twice the transmissive rate.
pub fn kappa_reflective(s21_mag: f64, f0: f64) -> Result<f64> {
    Ok(2.0 * kappa_transmissive(s21_mag, f0)?)
}

/// Weak-coupling closed forms for the resonant frequency and decay rate of
/// a quarter-wave resonator loaded by a backward coupler of length ell_c
/// (both rates in rad/s):
///
/// omega_r ~ (pi v / 2 ell_r) [1 + zeta^2 (ell_c/2ell_r - sin(pi ell_c/ell_r)/2pi)],
/// kappa_r ~ (2 zeta^2 v / ell_r) sin^2(pi ell_c / 2 ell_r).
pub fn backward_coupler_resonator_mode(
    att: &CouplerAttachment,
    res: &DistributedResonator,
    zeta: f64,
) -> Result<(f64, f64)> {
    if res.kind() != ResonatorKind::QuarterWave {
        return Err(Error::invalid(
            "closed-form loaded-mode expressions are available for quarter-wave resonators only",
        ));
    }
    if !zeta.is_finite() || zeta.abs() >= 1.0 {
        return Err(Error::CouplingOutOfRange { value: zeta });
    }
    if zeta.abs() > 0.2 {
        log::warn!(
            "coupling coefficient {zeta} exceeds 0.2; the O(zeta^2) closed forms lose accuracy"
        );
    }
    let ell_r = res.length();
    let ell_c = att.coupler().length();
    let v = res.v_ph();
    let ratio = ell_c / ell_r;
    let omega_r = (PI * v / (2.0 * ell_r))
        * (1.0 + zeta * zeta * (0.5 * ratio - (PI * ratio).sin() / (2.0 * PI)));
    let kappa_r = (2.0 * zeta * zeta * v / ell_r) * (0.5 * PI * ratio).sin().powi(2);
    Ok((omega_r, kappa_r))
}

/// 4-port admittance of an ideal backward coupler section with coupling
/// `zeta`, modal electrical angle `theta`, and mean line admittance `y0`:
///
/// Y = (j y0 / sqrt(1-zeta^2)) [[-cot, csc], [csc, -cot]] (x) [[1, -zeta], [-zeta, 1]],
///
/// where the Kronecker factors run over (left end, right end) and
/// (line 1, line 2), giving port order (L1, L2, R1, R2).
pub fn coupler_admittance(zeta: f64, theta: f64, y0: f64) -> Result<ComplexMatrix> {
    if !zeta.is_finite() || zeta.abs() >= 1.0 {
        return Err(Error::CouplingOutOfRange { value: zeta });
    }
    if !(y0 > 0.0) || !y0.is_finite() {
        return Err(Error::invalid(format!(
            "line admittance must be positive, got {y0}"
        )));
    }
    let sin = theta.sin();
    if sin.abs() < 1e-12 {
        return Err(Error::SingularAtResonantLength);
    }
    let scale = y0 / (1.0 - zeta * zeta).sqrt();
    let ends = [
        [-theta.cos() / sin, 1.0 / sin],
        [1.0 / sin, -theta.cos() / sin],
    ];
    let lines = [[1.0, -zeta], [-zeta, 1.0]];
    let mut y = ComplexMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    y.set(
                        2 * a + i,
                        2 * b + j,
                        C64::new(0.0, scale * ends[a][b] * lines[i][j]),
                    );
                }
            }
        }
    }
    Ok(y)
}

/// Reflection seen from the feed line near a reflectively coupled
/// resonance: a unit-magnitude Lorentzian phase wrapped in the fixed
/// electrical delay of the coupler-plus-stub path,
/// S11 = e^{-j 2 beta (ell_c + ell_f)} (kappa/2 - j(w - w_r))/(kappa/2 + j(w - w_r)).
pub fn reflective_s11_near_resonance(
    omega: f64,
    omega_r: f64,
    kappa_r: f64,
    beta: f64,
    ell_c: f64,
    ell_f: f64,
) -> C64 {
    let delay = C64::from_polar(1.0, -2.0 * beta * (ell_c + ell_f));
    let delta = omega - omega_r;
    delay * C64::new(0.5 * kappa_r, -delta) / C64::new(0.5 * kappa_r, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupled_lines::backward_coupler_smatrix;
    use approx::assert_relative_eq;

    fn quarter(f0: f64) -> DistributedResonator {
        DistributedResonator::new(ResonatorKind::QuarterWave, f0, 50.0, 1.2e8).unwrap()
    }

    fn half(f0: f64) -> DistributedResonator {
        DistributedResonator::new(ResonatorKind::HalfWave, f0, 50.0, 1.2e8).unwrap()
    }

    fn coupler_section(res: &DistributedResonator, lc_over_lr: f64) -> CoupledLineParams {
        let z0 = 50.0;
        let v = res.v_ph();
        CoupledLineParams::new(z0 / v, 0.0, 1.0 / (z0 * v), 0.0, lc_over_lr * res.length()).unwrap()
    }

    #[test]
    fn resonator_lengths() {
        assert_relative_eq!(quarter(5e9).length(), 6e-3, max_relative = 1e-15);
        assert_relative_eq!(half(5e9).length(), 12e-3, max_relative = 1e-15);
        assert!(DistributedResonator::new(ResonatorKind::QuarterWave, 0.0, 50.0, 1e8).is_err());
    }

    #[test]
    fn mode_amplitude_examples() {
        let q = quarter(5e9);
        assert_eq!(mode_amp_from_powerwave(0.0, &q).unwrap(), 0.0);
        assert_relative_eq!(
            mode_amp_from_powerwave(1.0, &q).unwrap(),
            1.0 / 1e10f64.sqrt(),
            max_relative = 1e-15
        );
        // Half-wave sections hold twice the amplitude at the same drive.
        let h = half(5e9);
        assert_relative_eq!(
            mode_amp_from_powerwave(1.0, &h).unwrap(),
            2.0 / 1e10f64.sqrt(),
            max_relative = 1e-15
        );
        // Energy identity: |a|^2 equals the round-trip integral
        // 2 * s^2 * (quarter period of the bounce) = s^2/(2 f0).
        let s: f64 = 0.7;
        let a = mode_amp_from_powerwave(s, &q).unwrap();
        let round_trip = 2.0 * s * s * (1.0 / (4.0 * q.f0()));
        assert_relative_eq!(a * a, round_trip, max_relative = 1e-14);
        assert!(mode_amp_from_powerwave(-1.0, &q).is_err());
    }

    #[test]
    fn transmissive_decay_rate() {
        assert_eq!(kappa_transmissive(0.0, 5e9).unwrap(), 0.0);
        // 4 f0 |S21|^2 / 2pi lands on the ~111 kHz reference value.
        let k = kappa_transmissive(5.91e-3, 5e9).unwrap();
        assert!((k / (2.0 * PI) - 111e3).abs() / 111e3 < 0.03);
        // Quadratic in the coupler transfer.
        let k2 = kappa_transmissive(2.0 * 5.91e-3, 5e9).unwrap();
        assert_relative_eq!(k2, 4.0 * k, max_relative = 1e-14);
        assert!(kappa_transmissive(1.0, 5e9).is_err());
        assert!(kappa_transmissive(0.1, 0.0).is_err());
    }

    #[test]
    fn reflective_decay_rate() {
        assert_eq!(kappa_reflective(0.0, 5e9).unwrap(), 0.0);
        let k = kappa_reflective(5.91e-3, 5e9).unwrap();
        assert!((k / (2.0 * PI) - 220.1e3).abs() / 220.1e3 < 0.03);
        for s in [1e-3, 5.91e-3, 0.1] {
            assert_relative_eq!(
                kappa_reflective(s, 5e9).unwrap(),
                2.0 * kappa_transmissive(s, 5e9).unwrap(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn attachment_validation() {
        let q = quarter(5e9);
        let c = coupler_section(&q, 0.1);
        assert!(CouplerAttachment::new(c, 0.2, FeedKind::Transmissive, 0.0, &q).is_ok());
        // Position must stay inside (0, pi/2) from the open end.
        assert!(CouplerAttachment::new(c, 0.0, FeedKind::Transmissive, 0.0, &q).is_err());
        assert!(CouplerAttachment::new(c, PI / 2.0, FeedKind::Transmissive, 0.0, &q).is_err());
        // Coupler longer than the resonator is rejected.
        let long = coupler_section(&half(5e9), 1.0);
        assert!(CouplerAttachment::new(long, 0.2, FeedKind::Transmissive, 0.0, &q).is_err());
        assert_relative_eq!(
            CouplerAttachment::maximal_feed_length(2e-3, &q),
            8e-3,
            max_relative = 1e-15
        );
    }

    #[test]
    fn loaded_mode_closed_forms() {
        let q = quarter(5e9);
        let att = |lc_over_lr: f64| {
            CouplerAttachment::new(
                coupler_section(&q, lc_over_lr),
                0.3,
                FeedKind::Reflective,
                0.0,
                &q,
            )
            .unwrap()
        };

        // zeta = 0: bare quarter-wave frequency, no decay.
        let (w, k) = backward_coupler_resonator_mode(&att(0.1), &q, 0.0).unwrap();
        assert_relative_eq!(w, PI * q.v_ph() / (2.0 * q.length()), max_relative = 1e-15);
        assert_eq!(k, 0.0);
        assert_relative_eq!(w, 2.0 * PI * 5e9, max_relative = 1e-15);

        // Full-length coupler: sin^2(pi/2) = 1 saturates kappa.
        let zeta = 0.01;
        let (_, k) = backward_coupler_resonator_mode(&att(1.0), &q, zeta).unwrap();
        assert_relative_eq!(
            k,
            2.0 * zeta * zeta * q.v_ph() / q.length(),
            max_relative = 1e-12
        );

        // Frozen values for the (zeta = 0.05, ell_c/ell_r = 0.1) reference
        // point used by the solver cross-checks.
        let (w, k) = backward_coupler_resonator_mode(&att(0.1), &q, 0.05).unwrap();
        assert_relative_eq!(w / (2.0 * PI), 5.000010230223e9, max_relative = 1e-9);
        assert_relative_eq!(k, 2.4471741852e6, max_relative = 1e-9);

        // kappa grows monotonically with coupler length.
        let mut last = 0.0;
        for r in [0.05, 0.1, 0.2, 0.5, 1.0] {
            let (_, k) = backward_coupler_resonator_mode(&att(r), &q, 0.05).unwrap();
            assert!(k > last);
            last = k;
        }

        // Half-wave sections have no closed form here.
        let h = half(5e9);
        let c = coupler_section(&h, 0.05);
        let att_h = CouplerAttachment::new(c, 0.3, FeedKind::Transmissive, 0.0, &h).unwrap();
        assert!(backward_coupler_resonator_mode(&att_h, &h, 0.05).is_err());
    }

    /// With the small-angle substitution |S21| = zeta sin(theta_c) at the
    /// resonant frequency (theta_c = pi ell_c / 2 ell_r for a quarter-wave
    /// section), the reflective rate 8 f0 |S21|^2 reproduces the closed
    /// form (2 zeta^2 v/ell_r) sin^2(theta_c) exactly, since v = 4 f0 ell_r.
    #[test]
    fn reflective_rate_consistent_with_loaded_mode_form() {
        let q = quarter(5e9);
        for (zeta, ratio) in [(0.02, 0.01), (0.05, 0.1), (0.1, 0.3)] {
            let att = CouplerAttachment::new(
                coupler_section(&q, ratio),
                0.3,
                FeedKind::Reflective,
                0.0,
                &q,
            )
            .unwrap();
            let (_, k_closed) = backward_coupler_resonator_mode(&att, &q, zeta).unwrap();
            let theta_c = 0.5 * PI * ratio;
            let k_wave = kappa_reflective(zeta * theta_c.sin(), q.f0()).unwrap();
            assert_relative_eq!(k_closed, k_wave, max_relative = 1e-12);
            // Substituting the bare angle instead differs only at O(theta^2).
            let k_small = kappa_reflective(zeta * theta_c, q.f0()).unwrap();
            assert!((k_small - k_closed).abs() / k_closed < theta_c * theta_c);
        }
    }

    #[test]
    fn admittance_structure() {
        // Uncoupled: two independent line sections, no cross-line entries.
        let y = coupler_admittance(0.0, 0.7, 0.02).unwrap();
        let cot = 0.7f64.cos() / 0.7f64.sin();
        let csc = 1.0 / 0.7f64.sin();
        assert!((y.at(0, 0) - C64::new(0.0, -0.02 * cot)).norm() < 1e-15);
        assert!((y.at(0, 2) - C64::new(0.0, 0.02 * csc)).norm() < 1e-15);
        assert_eq!(y.at(0, 1).norm(), 0.0);
        assert_eq!(y.at(0, 3).norm(), 0.0);

        // theta = pi/2 kills the diagonal cot blocks.
        let y = coupler_admittance(0.3, PI / 2.0, 0.02).unwrap();
        assert!(y.at(0, 0).norm() < 1e-15);
        assert!(y.at(1, 1).norm() < 1e-15);
        assert!(y.at(0, 2).norm() > 0.0);

        // Symmetric and purely imaginary everywhere.
        let y = coupler_admittance(0.3, 0.7, 0.02).unwrap();
        assert_eq!(y.sub(&y.transpose()).max_abs(), 0.0);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(y.at(r, c).re, 0.0);
            }
        }

        assert!(matches!(
            coupler_admittance(0.3, PI, 0.02),
            Err(Error::SingularAtResonantLength)
        ));
        assert!(coupler_admittance(1.2, 0.7, 0.02).is_err());
    }

    #[test]
    fn admittance_matches_scattering_closed_form() {
        // Convert Y to S against a uniform 50-ohm reference and compare
        // with the ideal-coupler S-matrix.
        let (zeta, theta, z0) = (0.3, 0.7, 50.0);
        let y = coupler_admittance(zeta, theta, 1.0 / z0).unwrap();
        let zy = y.scale(C64::new(z0, 0.0));
        let eye = ComplexMatrix::identity(4);
        let s = zy.add(&eye).solve_columns(&eye.sub(&zy)).unwrap();
        let closed = backward_coupler_smatrix(zeta, theta).unwrap();
        assert!(s.sub(&closed).max_abs() < 1e-10);
    }

    #[test]
    fn reflective_reflection_lorentzian() {
        let (w_r, k_r, beta, lc, lf) = (2.0 * PI * 5e9, 1e6, 200.0, 6e-4, 8e-3);
        // On resonance: pure path delay.
        let s = reflective_s11_near_resonance(w_r, w_r, k_r, beta, lc, lf);
        assert!((s - C64::from_polar(1.0, -2.0 * beta * (lc + lf))).norm() < 1e-12);
        // Half-width detuning advances the Lorentzian phase by -pi/2.
        let s_half = reflective_s11_near_resonance(w_r + 0.5 * k_r, w_r, k_r, beta, lc, lf);
        let rel = s_half / s;
        assert_relative_eq!(rel.arg(), -PI / 2.0, max_relative = 1e-12);
        // Unit magnitude across the window.
        for k in -50..=50 {
            let w = w_r + k as f64 * 0.1 * k_r;
            let s = reflective_s11_near_resonance(w, w_r, k_r, beta, lc, lf);
            assert_relative_eq!(s.norm(), 1.0, epsilon = 1e-13);
        }
    }
}
