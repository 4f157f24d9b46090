//! Shared numerical kernel: dense complex linear algebra, phase unwrapping,
//! Newton root refinement, fixed-step RK4, and small interpolation helpers.
//!
//! Everything here is pure and reentrant; matrices are dense row-major
//! (networks in this crate stay below a few dozen nodes, so sparsity is
//! irrelevant and direct LU with partial pivoting is the right tool).

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Shorthand for the complex scalar type used throughout the crate.
pub type C64 = Complex64;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from row slices; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        ComplexMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    /// Accumulate into an entry (admittance-stamp helper).
    pub fn add_at(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c));
            }
        }
        t
    }

    pub fn conj_transpose(&self) -> Self {
        let mut t = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).conj());
            }
        }
        t
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out.add_at(r, c, a * other.at(k, c));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Per-row infinity norms (used to fix determinant row scaling).
    pub fn row_inf_norms(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.at(r, c).norm())
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    /// Solve A x = b by LU with partial pivoting.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let cols = self.solve_columns(&ComplexMatrix {
            rows: b.len(),
            cols: 1,
            data: b.to_vec(),
        })?;
        Ok(cols.data)
    }

    /// Solve A X = B column-wise (shared factorization).
    pub fn solve_columns(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        assert_eq!(self.rows, self.cols, "solve requires a square matrix");
        assert_eq!(self.rows, b.rows, "dimension mismatch");
        let n = self.rows;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let pivot_tol = 1e-13 * self.max_abs();

        for k in 0..n {
            // Partial pivot.
            let mut p = k;
            let mut pmax = lu.at(k, k).norm();
            for r in (k + 1)..n {
                let m = lu.at(r, k).norm();
                if m > pmax {
                    pmax = m;
                    p = r;
                }
            }
            if pmax < pivot_tol || pmax == 0.0 {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for c in 0..n {
                    let tmp = lu.at(k, c);
                    lu.set(k, c, lu.at(p, c));
                    lu.set(p, c, tmp);
                }
                perm.swap(k, p);
            }
            let inv_piv = C64::new(1.0, 0.0) / lu.at(k, k);
            for r in (k + 1)..n {
                let factor = lu.at(r, k) * inv_piv;
                lu.set(r, k, factor);
                for c in (k + 1)..n {
                    let v = lu.at(r, c) - factor * lu.at(k, c);
                    lu.set(r, c, v);
                }
            }
        }

        let mut out = ComplexMatrix::zeros(n, b.cols);
        for col in 0..b.cols {
            // Apply permutation, then forward/back substitution.
            let mut y: Vec<C64> = (0..n).map(|r| b.at(perm[r], col)).collect();
            for r in 1..n {
                for c in 0..r {
                    let l = lu.at(r, c);
                    y[r] = y[r] - l * y[c];
                }
            }
            for r in (0..n).rev() {
                for c in (r + 1)..n {
                    let u = lu.at(r, c);
                    y[r] = y[r] - u * y[c];
                }
                y[r] /= lu.at(r, r);
            }
            for r in 0..n {
                out.set(r, col, y[r]);
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve_columns(&ComplexMatrix::identity(self.rows))
    }

    /// Determinant of the row-scaled matrix diag(1/scales)·A.
    ///
    /// The scales must be frequency-independent across a mode search so the
    /// scaled determinant keeps its zeros and stays in floating-point range;
    /// callers typically take `row_inf_norms` at a window-center frequency.
    /// Returns 0 when elimination hits an exactly zero pivot column.
    pub fn det_scaled(&self, scales: &[f64]) -> C64 {
        assert_eq!(self.rows, self.cols, "determinant requires a square matrix");
        assert_eq!(scales.len(), self.rows);
        let n = self.rows;
        let mut m = self.clone();
        for r in 0..n {
            let s = if scales[r] > 0.0 { scales[r] } else { 1.0 };
            for c in 0..n {
                let v = m.at(r, c) / s;
                m.set(r, c, v);
            }
        }
        let mut det = C64::new(1.0, 0.0);
        for k in 0..n {
            let mut p = k;
            let mut pmax = m.at(k, k).norm();
            for r in (k + 1)..n {
                let mag = m.at(r, k).norm();
                if mag > pmax {
                    pmax = mag;
                    p = r;
                }
            }
            if pmax == 0.0 {
                return C64::new(0.0, 0.0);
            }
            if p != k {
                for c in 0..n {
                    let tmp = m.at(k, c);
                    m.set(k, c, m.at(p, c));
                    m.set(p, c, tmp);
                }
                det = -det;
            }
            let piv = m.at(k, k);
            det *= piv;
            let inv_piv = C64::new(1.0, 0.0) / piv;
            for r in (k + 1)..n {
                let factor = m.at(r, k) * inv_piv;
                for c in (k + 1)..n {
                    let v = m.at(r, c) - factor * m.at(k, c);
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Spectral norm (largest singular value) by power iteration on A†A.
    pub fn spectral_norm(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        // Deterministic, non-degenerate start vector.
        let mut v: Vec<C64> = (0..self.cols)
            .map(|i| C64::new(1.0 + 0.01 * i as f64, 0.02 * i as f64))
            .collect();
        let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let n0 = norm(&v);
        for z in v.iter_mut() {
            *z /= n0;
        }
        let at = self.conj_transpose();
        let mut lambda = 0.0;
        for _ in 0..200 {
            let w = at.mul_vec(&self.mul_vec(&v));
            let nw = norm(&w);
            if nw == 0.0 {
                return 0.0;
            }
            let next = nw;
            v = w.into_iter().map(|z| z / nw).collect();
            if (next - lambda).abs() <= 1e-14 * next.max(1.0) {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.sqrt()
    }
}

/// Solve A x = b; thin functional wrapper over [`ComplexMatrix::solve`].
pub fn solve_linear(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    a.solve(b)
}

/// Axis interpretation for a [`ComplexTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisUnit {
    /// Angular frequency in rad/s.
    RadPerSec,
    /// Time in seconds.
    Seconds,
}

/// A complex-valued sampled curve (S-parameter sweep, mode trajectory, ...)
/// over a strictly increasing real axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTrace {
    axis: Vec<f64>,
    values: Vec<C64>,
    unit: AxisUnit,
}

impl ComplexTrace {
    pub fn new(axis: Vec<f64>, values: Vec<C64>, unit: AxisUnit) -> Result<Self> {
        if axis.len() != values.len() {
            return Err(Error::invalid(format!(
                "trace axis has {} samples but values has {}",
                axis.len(),
                values.len()
            )));
        }
        if axis.len() < 2 {
            return Err(Error::invalid("trace needs at least 2 samples"));
        }
        if !axis.iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("trace axis must be finite"));
        }
        if axis.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("trace axis must be strictly increasing"));
        }
        Ok(ComplexTrace { axis, values, unit })
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn unit(&self) -> AxisUnit {
        self.unit
    }

    /// Unwrapped phase of the trace values.
    pub fn unwrapped_phase(&self) -> Result<Vec<f64>> {
        unwrap_phase(&self.values)
    }
}

/// Continuous (unwrapped) phase of a complex sample sequence.
///
/// The first sample's phase lies in (-pi, pi]; successive samples differ by
/// less than pi (half-turn rule).
pub fn unwrap_phase(values: &[C64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev_raw = 0.0;
    for (index, v) in values.iter().enumerate() {
        if v.norm() == 0.0 {
            return Err(Error::ZeroMagnitudeSample { index });
        }
        let mut raw = v.arg();
        if raw <= -PI {
            raw += 2.0 * PI;
        }
        if index == 0 {
            out.push(raw);
        } else {
            let mut delta = raw - prev_raw;
            delta -= 2.0 * PI * (delta / (2.0 * PI)).round();
            if delta <= -PI {
                delta += 2.0 * PI;
            }
            out.push(out[index - 1] + delta);
        }
        prev_raw = raw;
    }
    Ok(out)
}

/// Newton root refinement with a central-difference derivative
/// (relative step 1e-6), at most 100 iterations.
///
/// Converged when |f(z)| <= 1e-10·|f(seed)| or the Newton step shrinks to
/// 1e-12·|z|.
pub fn refine_root<F>(mut f: F, seed: C64) -> Result<C64>
where
    F: FnMut(C64) -> Result<C64>,
{
    const MAX_ITER: usize = 100;
    let f0_mag = f(seed)?.norm();
    if f0_mag == 0.0 {
        return Ok(seed);
    }
    let mut z = seed;
    for _ in 0..MAX_ITER {
        let fz = f(z)?;
        if fz.norm() <= 1e-10 * f0_mag {
            return Ok(z);
        }
        let h = if z.norm() > 0.0 {
            1e-6 * z.norm()
        } else {
            1e-6
        };
        let hp = C64::new(h, 0.0);
        let deriv = (f(z + hp)? - f(z - hp)?) / (2.0 * h);
        if deriv.norm() == 0.0 {
            return Err(Error::NoConvergence {
                iterations: MAX_ITER,
            });
        }
        let step = -fz / deriv;
        z += step;
        if step.norm() <= 1e-12 * z.norm() {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITER,
    })
}

/// Fixed-step classical RK4 over a complex state vector.
///
/// The span is divided into `round(span/dt)` equal steps so the integration
/// lands exactly on `t_span.1`. `observe` is called at every accepted state,
/// including the initial one.
pub fn rk4_path<R, O>(y0: &[C64], t_span: (f64, f64), dt: f64, mut rhs: R, mut observe: O)
where
    R: FnMut(f64, &[C64], &mut [C64]),
    O: FnMut(f64, &[C64]),
{
    let (t0, t1) = t_span;
    assert!(
        t1 > t0 && dt > 0.0,
        "forward time span and positive dt required"
    );
    let span = t1 - t0;
    let n_steps = (span / dt).round().max(1.0) as usize;
    let h = span / n_steps as f64;
    let dim = y0.len();

    let mut y = y0.to_vec();
    let mut k1 = vec![C64::new(0.0, 0.0); dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    observe(t0, &y);
    for step in 0..n_steps {
        let t = t0 + step as f64 * h;
        rhs(t, &y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        rhs(t + 0.5 * h, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        rhs(t + 0.5 * h, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * k3[i];
        }
        rhs(t + h, &tmp, &mut k4);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        observe(t0 + (step + 1) as f64 * h, &y);
    }
}

/// Vertex of the parabola through (x0-h, ym), (x0, y0), (x0+h, yp).
///
/// Returns `(x_vertex, y_vertex)`, or `None` when the three points are
/// collinear (no curvature).
pub fn parabola_vertex(x0: f64, h: f64, ym: f64, y0: f64, yp: f64) -> Option<(f64, f64)> {
    let denom = ym - 2.0 * y0 + yp;
    if denom == 0.0 {
        return None;
    }
    let dx = 0.5 * h * (ym - yp) / denom;
    let yv = y0 - (ym - yp).powi(2) / (8.0 * denom);
    Some((x0 + dx, yv))
}

/// Abscissa where the segment (x1,y1)-(x2,y2) crosses `target`.
pub fn linear_crossing(x1: f64, y1: f64, x2: f64, y2: f64, target: f64) -> f64 {
    if y2 == y1 {
        return 0.5 * (x1 + x2);
    }
    x1 + (target - y1) * (x2 - x1) / (y2 - y1)
}
