//! Steady-state spectral response of the weakly driven atom-cavity system.
//!
//! With the input kept weak enough not to saturate it, the atom behaves as
//! a harmonic oscillator and the linearized Langevin system gives a 2x2
//! scattering matrix. The reflection and emission amplitudes at detuning
//! delta are
//!
//! ```text
//! r = (g^2 + (i delta + gamma/2)(i delta - kappa)) / D
//! e = sqrt(2 kappa gamma) g / D
//! D = g^2 + (i delta + gamma/2)(i delta + kappa)
//! ```
//!
//! which satisfy |r|^2 + |e|^2 = 1 identically (the linear model is a
//! lossless two-port). At zero detuning r = (C - 1)/(C + 1) and
//! |e|^2 = 4C/(1 + C)^2 with cooperativity C = 2 g^2/(kappa gamma).

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::pulse::{Pulse, TimeGrid};
use crate::{Error, Result};

type C64 = Complex64;

/// Atom-cavity system for spectral response computations.
#[derive(Debug, Clone, Copy)]
pub struct ResponseSystem {
    /// Single-photon coupling (rad/s).
    pub g: f64,
    /// Cavity field decay (rad/s).
    pub kappa: f64,
    /// Atomic population decay (rad/s).
    pub gamma: f64,
    /// When false the coupling is forced to zero (empty cavity).
    pub atom_present: bool,
}

impl ResponseSystem {
    pub fn new(g: f64, kappa: f64, gamma: f64) -> Self {
        ResponseSystem {
            g,
            kappa,
            gamma,
            atom_present: true,
        }
    }

    /// Empty cavity: same decay rates, no atom.
    pub fn empty(kappa: f64, gamma: f64) -> Self {
        ResponseSystem {
            g: 0.0,
            kappa,
            gamma,
            atom_present: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidParameter {
                name: "kappa".into(),
                message: format!("cavity decay must be positive, got {}", self.kappa),
            });
        }
        for (name, v) in [("g", self.g), ("gamma", self.gamma)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name: name.into(),
                    message: format!("must be a finite non-negative rate, got {v}"),
                });
            }
        }
        Ok(())
    }

    fn g_eff(&self) -> f64 {
        if self.atom_present {
            self.g
        } else {
            0.0
        }
    }

    /// Cooperativity C = 2 g^2/(kappa gamma).
    pub fn cooperativity(&self) -> f64 {
        let g = self.g_eff();
        2.0 * g * g / (self.kappa * self.gamma)
    }
}

/// Complex response at one detuning.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralPoint {
    /// Detuning of the input from the common atom/cavity resonance (rad/s).
    pub delta: f64,
    /// Reflection amplitude a_out / a_in.
    pub r: C64,
    /// Emission amplitude s_out / a_in (phase is convention-dependent).
    pub e: C64,
    /// Principal-value phase of r, in (-pi, pi].
    pub phase: f64,
    /// Spontaneous-emission probability |e|^2.
    pub emission_prob: f64,
}

/// Scattering response at a single detuning.
///
/// For `g = 0` the atom factors out and the empty-cavity form
/// (i delta - kappa)/(i delta + kappa) is used directly, which is the
/// gamma -> 0 limit of the general expression (the general formula is 0/0
/// at g = gamma = delta = 0).
pub fn response_at(system: &ResponseSystem, delta: f64) -> SpectralPoint {
    let g = system.g_eff();
    let kappa = system.kappa;
    let gamma = system.gamma;
    let id = C64::new(0.0, delta);

    let (r, e) = if g == 0.0 {
        let r = (id - kappa) / (id + kappa);
        (r, C64::ZERO)
    } else {
        let d = g * g + (id + 0.5 * gamma) * (id + kappa);
        debug_assert!(d.norm() > 0.0, "denominator vanished at delta = {delta}");
        let r = (g * g + (id + 0.5 * gamma) * (id - kappa)) / d;
        let e = C64::new((2.0 * kappa * gamma).sqrt() * g, 0.0) / d;
        (r, e)
    };

    SpectralPoint {
        delta,
        r,
        e,
        phase: r.arg(),
        emission_prob: e.norm_sqr(),
    }
}

/// Pointwise response over a detuning grid.
pub fn spectrum(system: &ResponseSystem, deltas: &[f64]) -> Vec<SpectralPoint> {
    deltas.iter().map(|&d| response_at(system, d)).collect()
}

/// Unwrap a phase sequence so consecutive samples never jump by more than
/// pi; the first sample keeps its principal value.
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    for (i, &p) in phases.iter().enumerate() {
        if i > 0 {
            let prev = phases[i - 1];
            let mut jump = p - prev;
            while jump > std::f64::consts::PI {
                jump -= std::f64::consts::TAU;
                offset -= std::f64::consts::TAU;
            }
            while jump < -std::f64::consts::PI {
                jump += std::f64::consts::TAU;
                offset += std::f64::consts::TAU;
            }
        }
        out.push(p + offset);
    }
    out
}

/// Zero-detuning behaviour versus cooperativity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CooperativityPoint {
    pub c: f64,
    pub r_at_zero: C64,
    pub phase_at_zero: f64,
    pub emission_at_zero: f64,
}

/// Sweep the zero-detuning response over cooperativity values at fixed
/// kappa and gamma (g is solved from C = 2 g^2 / (kappa gamma)).
///
/// Closed forms: r(0) = (C - 1)/(C + 1), |e(0)|^2 = 4C/(1 + C)^2.
pub fn cooperativity_sweep(kappa: f64, gamma: f64, cs: &[f64]) -> Vec<CooperativityPoint> {
    cs.iter()
        .map(|&c| {
            let g = (0.5 * c * kappa * gamma).sqrt();
            let sys = ResponseSystem::new(g, kappa, gamma);
            let pt = response_at(&sys, 0.0);
            CooperativityPoint {
                c,
                r_at_zero: pt.r,
                phase_at_zero: pt.phase,
                emission_at_zero: pt.emission_prob,
            }
        })
        .collect()
}

/// Grid and output of a free-induction-decay style readout computation.
#[derive(Debug, Clone)]
pub struct FidResult {
    /// Time-domain output field on the internal uniform grid.
    pub output: Pulse,
    /// Probe resampled onto the same grid (for plotting/comparison).
    pub probe_resampled: Pulse,
    /// Angular-frequency extent of the internal grid (rad/s).
    pub extent: f64,
    /// Angular-frequency resolution of the internal grid (rad/s).
    pub resolution: f64,
    /// Number of FFT points.
    pub n_points: usize,
}

/// Extent of the FID frequency grid in units of kappa.
pub const FID_EXTENT_KAPPAS: f64 = 20.0;

/// The narrowest spectral feature is resolved by this many grid points.
pub const FID_RESOLUTION_DIVISOR: f64 = 10.0;

/// Time-domain response of the atom-cavity system to a weak probe pulse,
/// computed by filtering the probe spectrum with the reflection amplitude
/// r(delta) on a uniform frequency grid.
///
/// The grid spans at least [`FID_EXTENT_KAPPAS`] kappa with resolution
/// finer than min(gamma/2, g^2/kappa)/[`FID_RESOLUTION_DIVISOR`], which
/// resolves the narrow atomic feature inside the broad cavity line. After
/// a short probe the output develops a tail decaying at the eliminated-atom
/// rate g^2/kappa + gamma/2. Probe amplitudes are arbitrary units; the
/// model is linear, so absolute scale carries no meaning.
pub fn fid_signal(system: &ResponseSystem, probe: &Pulse) -> Result<FidResult> {
    system.validate()?;
    let g = system.g_eff();
    let kappa = system.kappa;
    let gamma = system.gamma;

    let mut feature = kappa;
    if gamma > 0.0 {
        feature = feature.min(0.5 * gamma);
    }
    if g > 0.0 {
        feature = feature.min(g * g / kappa);
    }
    let resolution_req = feature / FID_RESOLUTION_DIVISOR;
    let extent = FID_EXTENT_KAPPAS * kappa;

    // Probe sampling must fit inside the grid bandwidth.
    let required_extent = std::f64::consts::TAU / probe.grid.dt;
    if required_extent > extent * (1.0 + 1e-12) {
        return Err(Error::ProbeBandwidth {
            probe_dt: probe.grid.dt,
            required_extent,
            extent,
        });
    }

    let mut n = (extent / resolution_req).ceil() as usize;
    n = n.next_power_of_two();
    let resolution = extent / n as f64;
    let dt = std::f64::consts::TAU / extent;
    let span = n as f64 * dt;

    if probe.grid.t0 < 0.0 {
        return Err(Error::ProbePlacement {
            message: format!("probe starts at t = {} < 0", probe.grid.t0),
        });
    }
    if probe.grid.end() > 0.5 * span {
        return Err(Error::ProbePlacement {
            message: format!(
                "probe ends at t = {} but must end before {} to leave room \
                 for the decay tail (grid span {span})",
                probe.grid.end(),
                0.5 * span
            ),
        });
    }

    let grid = TimeGrid::new(0.0, dt, n);
    let mut buf: Vec<C64> = grid.times().map(|t| probe.value_at(t)).collect();
    let probe_resampled = Pulse::new(grid, buf.clone())?;

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    // Forward transform sum p(t_n) e^{-i delta_k t_n}; bin k >= n/2 holds
    // the negative detunings delta_k - extent.
    fft.process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let delta = if k <= n / 2 {
            k as f64 * resolution
        } else {
            k as f64 * resolution - extent
        };
        *v *= response_at(system, delta).r;
    }
    ifft.process(&mut buf);
    let scale = 1.0 / n as f64;
    for v in &mut buf {
        *v *= scale;
    }

    Ok(FidResult {
        output: Pulse::new(grid, buf)?,
        probe_resampled,
        extent,
        resolution,
        n_points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::GaussianPulse;
    use approx::assert_relative_eq;

    fn bad_cavity() -> ResponseSystem {
        // (g, kappa, gamma) = (1, 10, 0.01) MHz, angular.
        ResponseSystem::new(1e6, 10e6, 0.01e6)
    }

    fn good_cavity() -> ResponseSystem {
        // (g, kappa, gamma) = (3.2, 0.32, 0.32) MHz, angular.
        ResponseSystem::new(3.2e6, 0.32e6, 0.32e6)
    }

    #[test]
    fn empty_cavity_reflects_with_pi_phase_on_resonance() {
        let sys = ResponseSystem::empty(5e6, 0.0);
        let pt = response_at(&sys, 0.0);
        assert_relative_eq!(pt.r.re, -1.0, max_relative = 1e-15);
        assert_eq!(pt.emission_prob, 0.0);
    }

    #[test]
    fn critical_coupling_kills_the_output() {
        // 2 g^2/(kappa gamma) = 1 at delta = 0: r = 0 and |e|^2 = 1.
        let kappa: f64 = 10e6;
        let gamma: f64 = 0.02e6;
        let g = (0.5 * kappa * gamma).sqrt();
        let pt = response_at(&ResponseSystem::new(g, kappa, gamma), 0.0);
        assert!(pt.r.norm() < 1e-14);
        assert_relative_eq!(pt.emission_prob, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn atom_flips_zero_detuning_phase_by_pi() {
        for sys in [bad_cavity(), good_cavity()] {
            let empty = ResponseSystem::empty(sys.kappa, sys.gamma);
            let with_atom = response_at(&sys, 0.0);
            let without = response_at(&empty, 0.0);
            let diff = (with_atom.phase - without.phase).abs();
            assert_relative_eq!(diff, std::f64::consts::PI, max_relative = 1e-9);
        }
    }

    #[test]
    fn unitarity_across_detuning() {
        for sys in [bad_cavity(), good_cavity()] {
            for k in -300..=300 {
                let delta = k as f64 * 1e5;
                let pt = response_at(&sys, delta);
                assert!(
                    (pt.r.norm_sqr() + pt.emission_prob - 1.0).abs() < 1e-12,
                    "unitarity broke at delta = {delta}"
                );
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let sys = bad_cavity();
        for delta in [0.3e6, 1.7e6, 12e6] {
            let plus = response_at(&sys, delta);
            let minus = response_at(&sys, -delta);
            assert!((minus.r - plus.r.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn emission_peaks_at_zero_detuning_in_bad_cavity() {
        let sys = bad_cavity();
        let deltas: Vec<f64> = (-2000..=2000).map(|k| k as f64 * 1e4).collect();
        let spec = spectrum(&sys, &deltas);
        let (imax, _) = spec
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.emission_prob.total_cmp(&b.1.emission_prob))
            .unwrap();
        assert_eq!(spec[imax].delta, 0.0);
    }

    #[test]
    fn vacuum_rabi_splitting_in_good_cavity() {
        let sys = good_cavity();
        let deltas: Vec<f64> = (-8000..=8000).map(|k| k as f64 * 1e3).collect();
        let spec = spectrum(&sys, &deltas);
        // Two local maxima of |e|^2, split by twice the imaginary part of
        // the drift-matrix eigenvalues.
        let probs: Vec<f64> = spec.iter().map(|p| p.emission_prob).collect();
        let mut maxima = Vec::new();
        for i in 1..probs.len() - 1 {
            if probs[i] > probs[i - 1] && probs[i] > probs[i + 1] {
                maxima.push(spec[i].delta);
            }
        }
        assert_eq!(maxima.len(), 2, "expected two peaks, got {maxima:?}");
        let split = maxima[1] - maxima[0];
        // Eigenvalues of [[-kappa, g], [-g, -gamma/2]]:
        // -(kappa + gamma/2)/2 +/- sqrt(((kappa - gamma/2)/2)^2 - g^2).
        let half_diff = 0.5 * (sys.kappa - 0.5 * sys.gamma);
        let expected = 2.0 * (sys.g * sys.g - half_diff * half_diff).sqrt();
        assert_relative_eq!(split, expected, max_relative = 0.01);
        assert_relative_eq!(split, 2.0 * sys.g, max_relative = 0.01);
    }

    #[test]
    fn phase_feature_width_is_two_g_squared_over_kappa() {
        let sys = bad_cavity();
        let deltas: Vec<f64> = (-5000..=5000).map(|k| k as f64 * 1e2).collect();
        let spec = spectrum(&sys, &deltas);
        let phases = unwrap_phases(&spec.iter().map(|p| p.phase).collect::<Vec<_>>());
        // Crossings of +pi/2 and -pi/2 bracket the narrow atomic feature.
        let half = std::f64::consts::FRAC_PI_2;
        let mut crossings = Vec::new();
        for i in 1..phases.len() {
            for target in [half, -half] {
                if (phases[i - 1] - target) * (phases[i] - target) < 0.0 {
                    crossings.push(deltas[i]);
                }
            }
        }
        assert_eq!(crossings.len(), 2, "crossings: {crossings:?}");
        let width = crossings[1] - crossings[0];
        let expected = 2.0 * sys.g * sys.g / sys.kappa;
        assert!(
            (width - expected).abs() / expected < 0.2,
            "width {width:.3e} vs 2g^2/kappa {expected:.3e}"
        );
    }

    #[test]
    fn unwrapping_removes_two_pi_jumps() {
        let sys = ResponseSystem::empty(1e6, 0.0);
        let deltas: Vec<f64> = (-400..=400).map(|k| k as f64 * 1e4).collect();
        let spec = spectrum(&sys, &deltas);
        let raw: Vec<f64> = spec.iter().map(|p| p.phase).collect();
        let unwrapped = unwrap_phases(&raw);
        let max_jump = unwrapped
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0f64, f64::max);
        assert!(max_jump < 0.5, "unwrapped phase still jumps by {max_jump}");
    }

    #[test]
    fn cooperativity_sweep_closed_forms() {
        let (kappa, gamma) = (10e6, 0.01e6);
        let cs: Vec<f64> = (0..=1000).map(|k| k as f64 * 0.1).collect();
        for pt in cooperativity_sweep(kappa, gamma, &cs) {
            let expect_r = (pt.c - 1.0) / (pt.c + 1.0);
            let expect_e = 4.0 * pt.c / (1.0 + pt.c).powi(2);
            assert!((pt.r_at_zero.re - expect_r).abs() < 1e-12, "C = {}", pt.c);
            assert!(pt.r_at_zero.im.abs() < 1e-12);
            assert!((pt.emission_at_zero - expect_e).abs() < 1e-12);
        }
    }

    #[test]
    fn cooperativity_limits() {
        let pts = cooperativity_sweep(10e6, 0.01e6, &[0.0, 1.0, 1e6]);
        assert_relative_eq!(pts[0].r_at_zero.re, -1.0, max_relative = 1e-14);
        assert_eq!(pts[0].emission_at_zero, 0.0);
        assert!(pts[1].r_at_zero.norm() < 1e-14);
        assert_relative_eq!(pts[1].emission_at_zero, 1.0, max_relative = 1e-12);
        assert!(pts[2].r_at_zero.re > 0.999_99);
        assert!(pts[2].emission_at_zero < 1e-5);
    }

    #[test]
    fn poles_match_drift_matrix_eigenvalues() {
        // r rebuilt from the eigenvalues of [[-kappa, g], [-g, -gamma/2]]
        // (denominator) and [[kappa, g], [-g, -gamma/2]] (numerator) must
        // match the closed form.
        let sys = good_cavity();
        let (g, kappa, gamma) = (sys.g, sys.kappa, sys.gamma);
        let quad_roots = |tr: f64, det: f64| -> (C64, C64) {
            // roots of s^2 - tr s + det
            let disc = C64::new(tr * tr / 4.0 - det, 0.0).sqrt();
            (
                C64::new(tr / 2.0, 0.0) + disc,
                C64::new(tr / 2.0, 0.0) - disc,
            )
        };
        let (p1, p2) = quad_roots(-kappa - 0.5 * gamma, 0.5 * kappa * gamma + g * g);
        let (z1, z2) = quad_roots(kappa - 0.5 * gamma, -0.5 * kappa * gamma + g * g);
        for kdelta in -50..=50 {
            let delta = kdelta as f64 * 2e5;
            let id = C64::new(0.0, delta);
            let r_eig = ((id - z1) * (id - z2)) / ((id - p1) * (id - p2));
            let r = response_at(&sys, delta).r;
            assert!((r - r_eig).norm() < 1e-9, "delta = {delta}");
        }
    }

    #[test]
    fn slow_pole_approaches_adiabatic_elimination_rate() {
        // kappa >= 100 g: slow pole real part ~ -(g^2/kappa + gamma/2).
        let (g, kappa, gamma): (f64, f64, f64) = (1.0, 100.0, 0.01);
        let b = kappa + 0.5 * gamma;
        let c = g * g + 0.5 * kappa * gamma;
        let slow = (-b + (b * b - 4.0 * c).sqrt()) / 2.0;
        let expected = g * g / kappa + 0.5 * gamma;
        assert!(((-slow) - expected).abs() / expected < 0.02);
    }

    #[test]
    fn fid_grid_and_probe_checks() {
        let sys = ResponseSystem::new(1.0, 100.0, 0.01);
        // Too-fine probe sampling is rejected with the required extent.
        let fine = TimeGrid::new(0.0, 1e-4, 64);
        let probe = Pulse::from_shape(fine, &GaussianPulse::new(1e-3, 3e-3));
        match fid_signal(&sys, &probe).unwrap_err() {
            Error::ProbeBandwidth {
                required_extent, ..
            } => assert!(required_extent > 2000.0),
            other => panic!("expected bandwidth error, got {other:?}"),
        }
    }

    #[test]
    fn fid_off_resonant_probe_passes_through() {
        // Probe modulated far outside the cavity line: |r| ~ 1 and the
        // residual empty-cavity phase 2 atan(kappa/delta) is a carrier
        // phase plus a tiny group delay, so the envelope is preserved.
        let sys = ResponseSystem::new(0.5, 5.0, 0.01);
        let dt = std::f64::consts::TAU / (FID_EXTENT_KAPPAS * sys.kappa);
        let grid = TimeGrid::new(0.0, dt, 512);
        let carrier = 40.0; // 8 kappa, inside the grid extent of 100
        let env = GaussianPulse::new(20.0 * dt, 100.0 * dt);
        let values: Vec<C64> = grid
            .times()
            .map(|t| crate::pulse::PulseShape::value(&env, t) * C64::new(0.0, -carrier * t).exp())
            .collect();
        let probe = Pulse::new(grid, values).unwrap();
        let res = fid_signal(&sys, &probe).unwrap();
        let in_e = probe.photon_number();
        let err: f64 = probe
            .grid
            .times()
            .zip(&probe.values)
            .map(|(t, v)| (res.output.value_at(t).norm() - v.norm()).powi(2))
            .sum::<f64>()
            * probe.grid.dt;
        assert!(
            err / in_e < 0.01,
            "off-resonant envelope distorted: rel {}",
            err / in_e
        );
        assert_relative_eq!(res.output.photon_number() / in_e, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn fid_empty_cavity_is_allpass() {
        let sys = ResponseSystem::empty(5.0, 0.0);
        let dt = std::f64::consts::TAU / (FID_EXTENT_KAPPAS * sys.kappa);
        // Short probe, well inside the first half of the response window.
        let grid = TimeGrid::new(0.0, dt, 64);
        let probe = Pulse::from_shape(grid, &GaussianPulse::new(3.0 * dt, 20.0 * dt));
        let res = fid_signal(&sys, &probe).unwrap();
        let ratio = res.output.photon_number() / probe.photon_number();
        assert_relative_eq!(ratio, 1.0, max_relative = 1e-6);
    }
}
