//! Uniform time grids, sampled wavepackets, and real control fields.

use num_complex::Complex64;

use crate::{Error, Result};

/// Uniform time grid: `len` samples starting at `t0`, spaced `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, len: usize) -> Self {
        assert!(dt > 0.0 && len >= 2, "grid needs dt > 0 and len >= 2");
        TimeGrid { t0, dt, len }
    }

    /// Grid spanning `[a, b]` with an even number of steps and dt <= dt_max.
    ///
    /// The even step count makes the grid symmetric about the midpoint,
    /// which keeps symmetric pulses exactly symmetric on samples.
    pub fn spanning(a: f64, b: f64, dt_max: f64) -> Self {
        assert!(b > a && dt_max > 0.0);
        let mut steps = ((b - a) / dt_max).ceil() as usize;
        if steps % 2 == 1 {
            steps += 1;
        }
        steps = steps.max(2);
        TimeGrid {
            t0: a,
            dt: (b - a) / steps as f64,
            len: steps + 1,
        }
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + self.dt * i as f64
    }

    pub fn end(&self) -> f64 {
        self.time(self.len - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.time(i))
    }

    pub fn approx_eq(&self, other: &TimeGrid) -> bool {
        self.len == other.len
            && (self.t0 - other.t0).abs() <= 1e-9 * self.dt
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
    }
}

/// Complex flux amplitude beta(t) sampled on a uniform grid; |beta|^2 has
/// units of photons per second, so the squared norm integrates to a photon
/// number.
#[derive(Debug, Clone)]
pub struct Pulse {
    pub grid: TimeGrid,
    pub values: Vec<Complex64>,
}

impl Pulse {
    pub fn new(grid: TimeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::GridMismatch {
                message: format!(
                    "pulse has {} samples but grid has {} points",
                    values.len(),
                    grid.len
                ),
            });
        }
        Ok(Pulse { grid, values })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Pulse {
            values: vec![Complex64::ZERO; grid.len],
            grid,
        }
    }

    /// Sample a shape onto a grid.
    pub fn from_shape(grid: TimeGrid, shape: &impl PulseShape) -> Self {
        Pulse {
            values: grid.times().map(|t| shape.value(t)).collect(),
            grid,
        }
    }

    /// Photon number: trapezoidal integral of |beta|^2 over the grid.
    pub fn photon_number(&self) -> f64 {
        trapezoid(self.grid.dt, self.values.iter().map(|v| v.norm_sqr()))
    }

    /// Sup-norm asymmetry about the grid midpoint, relative to the pulse
    /// peak; 0 for an exactly symmetric pulse.
    pub fn asymmetry(&self) -> f64 {
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.values.len();
        (0..n)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).norm())
            .fold(0.0f64, f64::max)
            / peak
    }

    /// Cubic (4-point Lagrange) interpolation at time `t`; 0 outside grid.
    pub fn value_at(&self, t: f64) -> Complex64 {
        interp_cubic(&self.grid, &self.values, t, Complex64::ZERO)
    }
}

/// Real control field Omega(t) sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct Control {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
}

impl Control {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len {
            return Err(Error::GridMismatch {
                message: format!(
                    "control has {} samples but grid has {} points",
                    values.len(),
                    grid.len
                ),
            });
        }
        Ok(Control { grid, values })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Control {
            values: vec![0.0; grid.len],
            grid,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Time-reversed copy on the same grid: out(t) = in(t_end - (t - t0)).
    pub fn reversed(&self) -> Control {
        let mut values = self.values.clone();
        values.reverse();
        Control {
            grid: self.grid,
            values,
        }
    }

    /// Cubic interpolation at time `t`; clamps to the nearest endpoint
    /// value outside the grid.
    pub fn value_at(&self, t: f64) -> f64 {
        if t <= self.grid.t0 {
            return self.values[0];
        }
        if t >= self.grid.end() {
            return self.values[self.grid.len - 1];
        }
        interp_cubic(&self.grid, &self.values, t, 0.0)
    }
}

/// Closed-form pulse envelope with two derivatives, as needed by the
/// driving-field synthesis.
pub trait PulseShape {
    fn value(&self, t: f64) -> Complex64;
    fn deriv1(&self, t: f64) -> Complex64;
    fn deriv2(&self, t: f64) -> Complex64;
}

/// Gaussian wavepacket with unit photon number:
/// beta(t) = pi^(-1/4) sigma^(-1/2) exp(-(t - t0)^2 / (2 sigma^2)).
///
/// The truncation is realized by the sampling window: [`Self::window`]
/// spans +/- `truncation` sigma around t0, and sampling onto a grid
/// covering exactly that window clips the tails (the envelope itself is
/// smooth everywhere, so no discontinuity is introduced at the edges).
#[derive(Debug, Clone, Copy)]
pub struct GaussianPulse {
    pub sigma: f64,
    pub t0: f64,
    pub truncation: f64,
    amplitude: f64,
}

impl GaussianPulse {
    /// Default truncation half-width in units of sigma.
    ///
    /// Six sigma keeps the leading-edge value and slope small enough that
    /// an emission starting from an empty cavity tracks the target well
    /// below the synthesis error budget.
    pub const DEFAULT_TRUNCATION: f64 = 6.0;

    pub fn new(sigma: f64, t0: f64) -> Self {
        Self::with_truncation(sigma, t0, Self::DEFAULT_TRUNCATION)
    }

    pub fn with_truncation(sigma: f64, t0: f64, truncation: f64) -> Self {
        assert!(sigma > 0.0 && truncation > 0.0);
        GaussianPulse {
            sigma,
            t0,
            truncation,
            amplitude: 1.0 / (std::f64::consts::PI.powf(0.25) * sigma.sqrt()),
        }
    }

    /// Support window [t0 - trunc*sigma, t0 + trunc*sigma].
    pub fn window(&self) -> (f64, f64) {
        (
            self.t0 - self.truncation * self.sigma,
            self.t0 + self.truncation * self.sigma,
        )
    }
}

impl PulseShape for GaussianPulse {
    fn value(&self, t: f64) -> Complex64 {
        let u = (t - self.t0) / self.sigma;
        Complex64::new(self.amplitude * (-0.5 * u * u).exp(), 0.0)
    }

    fn deriv1(&self, t: f64) -> Complex64 {
        self.value(t) * (-(t - self.t0) / (self.sigma * self.sigma))
    }

    fn deriv2(&self, t: f64) -> Complex64 {
        let u = (t - self.t0) / self.sigma;
        self.value(t) * ((u * u - 1.0) / (self.sigma * self.sigma))
    }
}

/// Sampled pulse reinterpreted as a shape; derivatives come from the local
/// cubic interpolant (central differences at fourth-order accuracy inside
/// the grid).
pub struct SampledShape<'a> {
    pulse: &'a Pulse,
}

impl<'a> SampledShape<'a> {
    pub fn new(pulse: &'a Pulse) -> Self {
        SampledShape { pulse }
    }
}

impl PulseShape for SampledShape<'_> {
    fn value(&self, t: f64) -> Complex64 {
        self.pulse.value_at(t)
    }

    fn deriv1(&self, t: f64) -> Complex64 {
        let h = self.pulse.grid.dt;
        (8.0 * (self.value(t + h) - self.value(t - h))
            - (self.value(t + 2.0 * h) - self.value(t - 2.0 * h)))
            / (12.0 * h)
    }

    fn deriv2(&self, t: f64) -> Complex64 {
        let h = self.pulse.grid.dt;
        (16.0 * (self.value(t + h) + self.value(t - h))
            - (self.value(t + 2.0 * h) + self.value(t - 2.0 * h))
            - 30.0 * self.value(t))
            / (12.0 * h * h)
    }
}

/// Trapezoidal rule on a uniform grid.
pub fn trapezoid(dt: f64, values: impl Iterator<Item = f64>) -> f64 {
    let vs: Vec<f64> = values.collect();
    if vs.len() < 2 {
        return 0.0;
    }
    let inner: f64 = vs[1..vs.len() - 1].iter().sum();
    dt * (0.5 * (vs[0] + vs[vs.len() - 1]) + inner)
}

/// Running trapezoidal integral; the i-th output integrates over `[t0, t_i]`.
pub fn cumulative_trapezoid(dt: f64, values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * dt * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

fn interp_cubic<T>(grid: &TimeGrid, values: &[T], t: f64, outside: T) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let x = (t - grid.t0) / grid.dt;
    if x < 0.0 || x > (grid.len - 1) as f64 {
        return outside;
    }
    let i0 = x.floor() as usize;
    if (x - i0 as f64).abs() < 1e-12 {
        return values[i0.min(grid.len - 1)];
    }
    // 4-point Lagrange stencil, one-sided near the edges.
    let i = i0.saturating_sub(1).min(grid.len - 4);
    let s = x - i as f64;
    let w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    values[i] * w0 + values[i + 1] * w1 + values[i + 2] * w2 + values[i + 3] * w3
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spanning_grid_is_symmetric() {
        let g = TimeGrid::spanning(0.0, 60.0, 0.005);
        assert!(g.dt <= 0.005);
        assert_eq!((g.len - 1) % 2, 0);
        assert_relative_eq!(g.end(), 60.0, max_relative = 1e-12);
    }

    #[test]
    fn gaussian_has_unit_photon_number() {
        let shape = GaussianPulse::new(5.0, 30.0);
        let grid = TimeGrid::spanning(0.0, 60.0, 0.005);
        let pulse = Pulse::from_shape(grid, &shape);
        assert_relative_eq!(pulse.photon_number(), 1.0, max_relative = 1e-9);
        assert!(pulse.asymmetry() < 1e-12);
    }

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let shape = GaussianPulse::new(2.0, 10.0);
        let h = 1e-5;
        for t in [7.0, 10.0, 12.5] {
            let d1_fd = (shape.value(t + h) - shape.value(t - h)) / (2.0 * h);
            let d2_fd = (shape.value(t + h) + shape.value(t - h) - 2.0 * shape.value(t)) / (h * h);
            assert_relative_eq!(shape.deriv1(t).re, d1_fd.re, max_relative = 1e-6);
            assert_relative_eq!(shape.deriv2(t).re, d2_fd.re, max_relative = 1e-4);
        }
    }

    #[test]
    fn sampled_shape_derivatives_track_analytic() {
        let shape = GaussianPulse::new(2.0, 10.0);
        let grid = TimeGrid::spanning(0.0, 20.0, 0.01);
        let pulse = Pulse::from_shape(grid, &shape);
        let sampled = SampledShape::new(&pulse);
        for t in [6.0, 10.0, 13.3] {
            assert_relative_eq!(
                sampled.deriv2(t).re,
                shape.deriv2(t).re,
                max_relative = 1e-4,
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let grid = TimeGrid::new(0.0, 0.5, 9);
        let values: Vec<f64> = grid
            .times()
            .map(|t| 1.0 + t - 2.0 * t * t + 0.3 * t * t * t)
            .collect();
        let ctrl = Control::new(grid, values).unwrap();
        for t in [0.1, 1.23, 2.71, 3.99] {
            let exact = 1.0 + t - 2.0 * t * t + 0.3 * t * t * t;
            assert_relative_eq!(ctrl.value_at(t), exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn control_reversal_is_sample_reversal() {
        let grid = TimeGrid::new(0.0, 1.0, 4);
        let c = Control::new(grid, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(c.reversed().values, vec![4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn trapezoid_matches_closed_form() {
        let grid = TimeGrid::new(0.0, 0.001, 1001);
        let vals: Vec<f64> = grid.times().map(|t| t * t).collect();
        let got = trapezoid(grid.dt, vals.iter().copied());
        assert_relative_eq!(got, 1.0 / 3.0, max_relative = 1e-5);
        let cum = cumulative_trapezoid(grid.dt, &vals);
        assert_relative_eq!(cum[1000], got, max_relative = 1e-14);
    }
}
