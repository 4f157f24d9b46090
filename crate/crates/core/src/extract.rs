//! Parameter extraction from frequency-domain traces, mirroring
//! experimental practice: resonance location, decay-rate estimates from
//! the reflection phase (slope, +/-90 degree width, full Lorentzian fit),
//! transmission 3 dB widths, and coupling coefficients from normal-mode
//! splitting.

use crate::coupled_pair::zeta_from_eigenfreqs;
use crate::error::{Error, Result};
use crate::numerics::{linear_crossing, parabola_vertex, ComplexMatrix, ComplexTrace, C64};

/// How a [`ResonanceFit`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    PhaseSlope,
    PhaseWidth90,
    Width3Db,
    LorentzianFit,
}

/// Extracted resonance parameters plus a goodness-of-fit figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceFit {
    pub omega0: f64,
    pub kappa: f64,
    pub method: FitMethod,
    /// RMS deviation from the refit model: radians for phase methods,
    /// fraction of the peak/baseline power for magnitude methods.
    pub residual: f64,
}

/// Feature class to locate in [`find_resonance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResonanceMode {
    /// Inflection of the reflection phase (second derivative crosses zero).
    ReflectionPhaseInflection,
    /// Maximum of |S|^2 in a transmission trace.
    TransmissionPeak,
    /// Minimum of |S|^2 in a transmission trace.
    TransmissionNull,
}

/// Transmission topology for 3 dB extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Two-sided resonator passing power: kappa_total = full 3 dB width.
    DoublyLoaded,
    /// Resonator hanging off a through line (notch): kappa = 2x width.
    SideCoupled,
}

fn require_samples(trace: &ComplexTrace, n: usize) -> Result<()> {
    if trace.len() < n {
        return Err(Error::invalid(format!(
            "trace has {} samples; at least {n} are required",
            trace.len()
        )));
    }
    Ok(())
}

/// Locate a resonance feature with sub-sample accuracy.
///
/// The phase mode finds the zero of the discrete second difference of the
/// unwrapped phase nearest the steepest-slope sample; the magnitude modes
/// refine the interior extremum of |S|^2 with a three-point parabola.
pub fn find_resonance(trace: &ComplexTrace, mode: ResonanceMode) -> Result<f64> {
    require_samples(trace, 8)?;
    let omega = trace.axis();
    let n = omega.len();
    match mode {
        ResonanceMode::ReflectionPhaseInflection => {
            let phi = trace.unwrapped_phase()?;
            // Steepest sample.
            let mut i_star = 1;
            let mut best = -1.0;
            for i in 1..n - 1 {
                let slope = ((phi[i + 1] - phi[i - 1]) / (omega[i + 1] - omega[i - 1])).abs();
                if slope > best {
                    best = slope;
                    i_star = i;
                }
            }
            // Second differences exist for i in 1..n-1; find the sign
            // change closest to the steepest sample.
            let d2 = |i: usize| phi[i + 1] - 2.0 * phi[i] + phi[i - 1];
            let mut found: Option<(usize, f64)> = None;
            for i in 1..n - 2 {
                let (a, b) = (d2(i), d2(i + 1));
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                if a * b <= 0.0 {
                    let w = linear_crossing(omega[i], a, omega[i + 1], b, 0.0);
                    let dist = (i as f64 - i_star as f64).abs();
                    if found.map_or(true, |(bi, _)| dist < (bi as f64 - i_star as f64).abs()) {
                        found = Some((i, w));
                    }
                }
            }
            found
                .map(|(_, w)| w)
                .ok_or_else(|| Error::not_found("phase inflection point in trace"))
        }
        ResonanceMode::TransmissionPeak | ResonanceMode::TransmissionNull => {
            let power: Vec<f64> = trace.values().iter().map(|v| v.norm_sqr()).collect();
            let better = |a: f64, b: f64| match mode {
                ResonanceMode::TransmissionPeak => a > b,
                _ => a < b,
            };
            let mut i_star = 1;
            for i in 1..n - 1 {
                if better(power[i], power[i_star]) {
                    i_star = i;
                }
            }
            // The extremum must be interior.
            if !better(power[i_star], power[0]) || !better(power[i_star], power[n - 1]) {
                return Err(Error::not_found("interior transmission extremum in trace"));
            }
            let h = 0.5 * (omega[i_star + 1] - omega[i_star - 1]);
            match parabola_vertex(
                omega[i_star],
                h,
                power[i_star - 1],
                power[i_star],
                power[i_star + 1],
            ) {
                Some((w, _)) => Ok(w),
                None => Ok(omega[i_star]),
            }
        }
    }
}

/// RMS deviation of an unwrapped phase trace from the Lorentzian phase
/// model with the given center and width, with the constant offset fitted.
fn phase_model_rms(omega: &[f64], phi: &[f64], omega0: f64, kappa: f64) -> f64 {
    let n = omega.len() as f64;
    let c = omega
        .iter()
        .zip(phi)
        .map(|(&w, &p)| p + 2.0 * (2.0 * (w - omega0) / kappa).atan())
        .sum::<f64>()
        / n;
    (omega
        .iter()
        .zip(phi)
        .map(|(&w, &p)| {
            let m = c - 2.0 * (2.0 * (w - omega0) / kappa).atan();
            (p - m) * (p - m)
        })
        .sum::<f64>()
        / n)
        .sqrt()
}

/// Decay rate from the reflection phase slope at resonance:
/// kappa = -4 / (d phase / d omega at omega0).
pub fn kappa_from_phase_slope(trace: &ComplexTrace) -> Result<ResonanceFit> {
    let omega0 = find_resonance(trace, ResonanceMode::ReflectionPhaseInflection)?;
    let omega = trace.axis();
    let phi = trace.unwrapped_phase()?;
    let n = omega.len();
    // Central difference at the grid point nearest the inflection.
    let mut i0 = omega
        .iter()
        .position(|&w| w >= omega0)
        .unwrap_or(n - 1)
        .clamp(1, n - 2);
    if i0 > 1 && (omega[i0] - omega0).abs() > (omega[i0 - 1] - omega0).abs() {
        i0 -= 1;
    }
    let slope = (phi[i0 + 1] - phi[i0 - 1]) / (omega[i0 + 1] - omega[i0 - 1]);
    if slope == 0.0 {
        return Err(Error::not_found("nonzero phase slope at resonance"));
    }
    // The model slope is -4/kappa; a conjugated trace flips the sign and
    // is folded back by the magnitude.
    let kappa = (4.0 / slope).abs();
    Ok(ResonanceFit {
        omega0,
        kappa,
        method: FitMethod::PhaseSlope,
        residual: phase_model_rms(omega, &phi, omega0, kappa),
    })
}

/// Decay rate from the +/-90 degree phase points about the resonance:
/// kappa equals their frequency separation.
pub fn kappa_from_phase_width(trace: &ComplexTrace) -> Result<ResonanceFit> {
    let omega0 = find_resonance(trace, ResonanceMode::ReflectionPhaseInflection)?;
    let omega = trace.axis();
    let phi = trace.unwrapped_phase()?;
    let n = omega.len();
    let i0 = omega
        .iter()
        .position(|&w| w >= omega0)
        .unwrap_or(n - 1)
        .clamp(1, n - 1);
    // Phase at the inflection, interpolated.
    let phi0 = phi[i0 - 1]
        + (phi[i0] - phi[i0 - 1]) * (omega0 - omega[i0 - 1]) / (omega[i0] - omega[i0 - 1]);
    let descending = phi[i0] < phi[i0 - 1];
    let half = std::f64::consts::FRAC_PI_2;
    // The side below omega0 sits +90 deg from phi0 for a descending trace.
    let (target_lo, target_hi) = if descending {
        (phi0 + half, phi0 - half)
    } else {
        (phi0 - half, phi0 + half)
    };
    let crossing_below = (0..i0)
        .rev()
        .find(|&i| (phi[i] - target_lo) * (phi[i + 1] - target_lo) <= 0.0)
        .map(|i| linear_crossing(omega[i], phi[i], omega[i + 1], phi[i + 1], target_lo));
    let crossing_above = (i0.max(1) - 1..n - 1)
        .find(|&i| (phi[i] - target_hi) * (phi[i + 1] - target_hi) <= 0.0)
        .map(|i| linear_crossing(omega[i], phi[i], omega[i + 1], phi[i + 1], target_hi));
    let (Some(w_lo), Some(w_hi)) = (crossing_below, crossing_above) else {
        return Err(Error::not_found("+/-90 degree phase points in trace"));
    };
    let kappa = w_hi - w_lo;
    if !(kappa > 0.0) {
        return Err(Error::not_found("ordered +/-90 degree phase points"));
    }
    Ok(ResonanceFit {
        omega0,
        kappa,
        method: FitMethod::PhaseWidth90,
        residual: phase_model_rms(omega, &phi, omega0, kappa),
    })
}

/// Find the half-power crossing while walking away from `start` in the
/// direction `step`, against a `falling` (or rising) power profile.
fn half_crossing(
    omega: &[f64],
    power: &[f64],
    start: usize,
    step: isize,
    level: f64,
    below: bool,
) -> Option<f64> {
    let n = omega.len() as isize;
    let mut i = start as isize;
    while i + step >= 0 && i + step < n {
        let j = (i + step) as usize;
        let (a, b) = (power[i as usize], power[j]);
        let crossed = if below { b <= level } else { b >= level };
        if crossed && (a - level) * (b - level) <= 0.0 {
            return Some(linear_crossing(omega[i as usize], a, omega[j], b, level));
        }
        i += step;
    }
    None
}

/// Decay rate from the 3 dB width of a transmission trace.
///
/// `DoublyLoaded` returns the total rate kappa1 + kappa2 = full width of
/// the peak; `SideCoupled` returns kappa = 2x the width of the notch
/// measured at half the off-resonant baseline power.
pub fn kappa_from_3db(trace: &ComplexTrace, topology: Topology) -> Result<ResonanceFit> {
    require_samples(trace, 8)?;
    let omega = trace.axis();
    let power: Vec<f64> = trace.values().iter().map(|v| v.norm_sqr()).collect();
    match topology {
        Topology::DoublyLoaded => {
            let omega0 = find_resonance(trace, ResonanceMode::TransmissionPeak)?;
            let i0 = nearest_index(omega, omega0);
            // Peak power from the parabola through the top three samples.
            let peak = parabola_vertex(
                omega[i0],
                0.5 * (omega[(i0 + 1).min(omega.len() - 1)] - omega[i0.max(1) - 1]),
                power[i0.max(1) - 1],
                power[i0],
                power[(i0 + 1).min(omega.len() - 1)],
            )
            .map(|(_, y)| y)
            .unwrap_or(power[i0]);
            let level = 0.5 * peak;
            let lo = half_crossing(omega, &power, i0, -1, level, true);
            let hi = half_crossing(omega, &power, i0, 1, level, true);
            let (Some(w_lo), Some(w_hi)) = (lo, hi) else {
                return Err(Error::not_found("3 dB points around transmission peak"));
            };
            let kappa = w_hi - w_lo;
            let residual = magnitude_model_rms(omega, &power, omega0, kappa, peak, true);
            Ok(ResonanceFit {
                omega0,
                kappa,
                method: FitMethod::Width3Db,
                residual,
            })
        }
        Topology::SideCoupled => {
            let omega0 = find_resonance(trace, ResonanceMode::TransmissionNull)?;
            let i0 = nearest_index(omega, omega0);
            let baseline = power.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let level = 0.5 * baseline;
            let lo = half_crossing(omega, &power, i0, -1, level, false);
            let hi = half_crossing(omega, &power, i0, 1, level, false);
            let (Some(w_lo), Some(w_hi)) = (lo, hi) else {
                return Err(Error::not_found(
                    "half-baseline points around transmission null",
                ));
            };
            let kappa = 2.0 * (w_hi - w_lo);
            let residual = magnitude_model_rms(omega, &power, omega0, kappa, baseline, false);
            Ok(ResonanceFit {
                omega0,
                kappa,
                method: FitMethod::Width3Db,
                residual,
            })
        }
    }
}

fn nearest_index(omega: &[f64], target: f64) -> usize {
    let mut i = omega
        .iter()
        .position(|&w| w >= target)
        .unwrap_or(omega.len() - 1);
    if i > 0 && (omega[i] - target).abs() > (omega[i - 1] - target).abs() {
        i -= 1;
    }
    i
}

/// RMS deviation of |S|^2 from the Lorentzian peak (or notch) model,
/// normalized by the peak (baseline) power.
fn magnitude_model_rms(
    omega: &[f64],
    power: &[f64],
    omega0: f64,
    kappa: f64,
    scale: f64,
    peak: bool,
) -> f64 {
    let n = omega.len() as f64;
    (omega
        .iter()
        .zip(power)
        .map(|(&w, &p)| {
            let d = 2.0 * (w - omega0) / kappa;
            let model = if peak {
                scale / (1.0 + d * d)
            } else {
                // Notch against a flat baseline; half-power at |d| = 1 with
                // kappa = 2 * width means delta = kappa/4 at the edges.
                let u = 4.0 * (w - omega0) / kappa;
                scale * u * u / (1.0 + u * u)
            };
            let r = (p - model) / scale;
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt()
}

/// Coupling coefficient from a two-peak transmission trace, given the bare
/// resonator frequencies. Peaks are the two tallest interior local maxima
/// above `rel_threshold` times the global maximum power.
pub fn zeta_from_peak_splitting_with_threshold(
    trace: &ComplexTrace,
    w01: f64,
    w02: f64,
    rel_threshold: f64,
) -> Result<f64> {
    require_samples(trace, 8)?;
    let omega = trace.axis();
    let power: Vec<f64> = trace.values().iter().map(|v| v.norm_sqr()).collect();
    let n = power.len();
    let global = power.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut peaks: Vec<(f64, f64)> = Vec::new(); // (power, refined omega)
    for i in 1..n - 1 {
        if power[i] > power[i - 1] && power[i] > power[i + 1] && power[i] >= global * rel_threshold
        {
            let h = 0.5 * (omega[i + 1] - omega[i - 1]);
            let (w, p) = parabola_vertex(omega[i], h, power[i - 1], power[i], power[i + 1])
                .unwrap_or((omega[i], power[i]));
            peaks.push((p, w));
        }
    }
    if peaks.len() < 2 {
        return Err(Error::not_found("two resolvable transmission peaks"));
    }
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (mut w1, mut w2) = (peaks[0].1, peaks[1].1);
    if w1 > w2 {
        std::mem::swap(&mut w1, &mut w2);
    }
    zeta_from_eigenfreqs(w01, w02, w1, w2)
}

/// [`zeta_from_peak_splitting_with_threshold`] with the default -40 dB
/// prominence threshold.
pub fn zeta_from_peak_splitting(trace: &ComplexTrace, w01: f64, w02: f64) -> Result<f64> {
    zeta_from_peak_splitting_with_threshold(trace, w01, w02, 1e-4)
}

/// Least-squares fit of the unwrapped phase to the Lorentzian reflection
/// model phase(w) = c - 2 atan(2(w - omega0)/kappa).
///
/// Works on reflection traces of isolated modes; the returned residual is
/// the RMS phase error in radians.
pub fn lorentzian_phase_fit(trace: &ComplexTrace) -> Result<ResonanceFit> {
    require_samples(trace, 8)?;
    let omega = trace.axis();
    let phi = trace.unwrapped_phase()?;
    let n = omega.len();
    // Dimensionless abscissa keeps the normal equations well conditioned.
    let wc = 0.5 * (omega[0] + omega[n - 1]);
    let s = 0.5 * (omega[n - 1] - omega[0]);
    let t: Vec<f64> = omega.iter().map(|&w| (w - wc) / s).collect();

    // Seed from the steepest sample: model slope at center is -2/gamma.
    let mut i_star = 1;
    let mut steep = 0.0;
    for i in 1..n - 1 {
        let slope = (phi[i + 1] - phi[i - 1]) / (t[i + 1] - t[i - 1]);
        if slope.abs() > steep {
            steep = slope.abs();
            i_star = i;
        }
    }
    if steep == 0.0 {
        return Err(Error::not_found("phase feature to fit (flat trace)"));
    }
    let mut c = phi[i_star];
    let mut t0 = t[i_star];
    let mut gamma = 2.0 / steep
        * if phi[i_star + 1] < phi[i_star - 1] {
            1.0
        } else {
            -1.0
        };

    let ssr_of = |c: f64, t0: f64, gamma: f64| -> f64 {
        t.iter()
            .zip(&phi)
            .map(|(&ti, &ph)| {
                let r = ph - (c - 2.0 * ((ti - t0) / gamma).atan());
                r * r
            })
            .sum()
    };
    let mut ssr = ssr_of(c, t0, gamma);
    for _ in 0..100 {
        // Gauss-Newton normal equations over (c, t0, gamma).
        let mut jtj = ComplexMatrix::zeros(3, 3);
        let mut jtr = ComplexMatrix::zeros(3, 1);
        for (&ti, &ph) in t.iter().zip(&phi) {
            let u = (ti - t0) / gamma;
            let den = 1.0 + u * u;
            let j = [1.0, (2.0 / gamma) / den, (2.0 * u / gamma) / den];
            let r = ph - (c - 2.0 * u.atan());
            for a in 0..3 {
                for b in 0..3 {
                    jtj.add_at(a, b, C64::new(j[a] * j[b], 0.0));
                }
                jtr.add_at(a, 0, C64::new(j[a] * r, 0.0));
            }
        }
        let Ok(delta) = jtj.solve_columns(&jtr) else {
            break;
        };
        let (dc, dt0, dg) = (delta.at(0, 0).re, delta.at(1, 0).re, delta.at(2, 0).re);
        // Damped acceptance.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = (c + lambda * dc, t0 + lambda * dt0, gamma + lambda * dg);
            if cand.2 != 0.0 {
                let trial = ssr_of(cand.0, cand.1, cand.2);
                if trial < ssr {
                    let gain = ssr - trial;
                    (c, t0, gamma) = cand;
                    ssr = trial;
                    accepted = true;
                    if gain <= 1e-14 * ssr.max(1e-300) {
                        // Converged: relative improvement exhausted.
                        lambda = 0.0;
                    }
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted || lambda == 0.0 {
            break;
        }
    }

    Ok(ResonanceFit {
        omega0: wc + s * t0,
        kappa: (2.0 * s * gamma).abs(),
        method: FitMethod::LorentzianFit,
        residual: (ssr / n as f64).sqrt(),
    })
}
