//! Whispering-gallery-mode resonator model and the design problem.
//!
//! The mode volume of the fundamental (radial order 1, polar order m = l)
//! TM whispering-gallery mode of a dielectric sphere is taken from the
//! standard asymptotic approximation
//!
//! ```text
//! V = 3.4 pi^(3/2) (lambda / 2 pi n)^3 l^(11/6) sqrt(l - m + 1)
//! ```
//!
//! with azimuthal order l = round(2 pi R n / lambda) and m = l (so the last
//! factor is 1). TE/TM correction factors are a sub-10% effect and are
//! ignored; the integer rounding of l makes radius sweeps piecewise
//! constant in l, which shows up as small discontinuities in design curves.

use serde::Serialize;

use crate::catalog::IonTransition;
use crate::coupling;
use crate::{Error, Result};

/// Coefficient of the asymptotic fundamental-mode volume model.
pub const MODE_VOLUME_COEFF: f64 = 3.4;

/// Geometry and quality description of a (spherical) WGM resonator.
#[derive(Debug, Clone, Serialize)]
pub struct ResonatorSpec {
    /// Sphere radius (m). Optional when `mode_volume_override` is set.
    pub radius: Option<f64>,
    /// Refractive index of the resonator material.
    pub n: f64,
    /// Vacuum design wavelength (m).
    pub wavelength_vac: f64,
    /// Quality factor.
    pub q: f64,
    /// Explicit mode volume (m^3), bypassing the WGM model.
    pub mode_volume_override: Option<f64>,
}

impl ResonatorSpec {
    pub fn new(radius: f64, n: f64, wavelength_vac: f64, q: f64) -> Self {
        ResonatorSpec {
            radius: Some(radius),
            n,
            wavelength_vac,
            q,
            mode_volume_override: None,
        }
    }

    /// Build a resonator made of the transition's host material, resonant at
    /// the transition wavelength (the monolithic case).
    pub fn for_transition(t: &IonTransition, radius: f64, q: f64) -> Self {
        ResonatorSpec::new(radius, t.host_index, t.wavelength_vac(), q)
    }

    pub fn with_mode_volume(mut self, v: f64) -> Self {
        self.mode_volume_override = Some(v);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name: name.to_string(),
                    message: format!("must be positive and finite, got {v}"),
                });
            }
            Ok(())
        };
        if let Some(r) = self.radius {
            positive("radius", r)?;
        }
        if let Some(v) = self.mode_volume_override {
            positive("mode_volume_override", v)?;
        }
        positive("Q", self.q)?;
        positive("wavelength_vac", self.wavelength_vac)?;
        if !(self.n >= 1.0) {
            return Err(Error::InvalidParameter {
                name: "n".to_string(),
                message: format!("refractive index must be >= 1, got {}", self.n),
            });
        }
        Ok(())
    }

    /// Mode volume (m^3): the override if set, otherwise the fundamental
    /// WGM model for the given radius.
    pub fn mode_volume(&self) -> Result<f64> {
        if let Some(v) = self.mode_volume_override {
            return Ok(v);
        }
        match self.radius {
            Some(r) => fundamental_mode_volume(r, self.n, self.wavelength_vac),
            None => Err(Error::MissingModeVolume),
        }
    }
}

/// Azimuthal order of the fundamental mode, l = round(2 pi R n / lambda).
pub fn azimuthal_order(radius: f64, n: f64, wavelength_vac: f64) -> i64 {
    (std::f64::consts::TAU * radius * n / wavelength_vac).round() as i64
}

/// Fundamental (radial order 1, m = l) WGM mode volume (m^3).
///
/// Errors for sub-wavelength resonators where the azimuthal order would
/// round below 1; scales as l^(11/6), i.e. sub-cubically in radius.
pub fn fundamental_mode_volume(radius: f64, n: f64, wavelength_vac: f64) -> Result<f64> {
    let ell = azimuthal_order(radius, n, wavelength_vac);
    if ell < 1 {
        return Err(Error::BelowModeCutoff {
            ell,
            radius_m: radius,
        });
    }
    let reduced = wavelength_vac / (std::f64::consts::TAU * n);
    Ok(MODE_VOLUME_COEFF
        * std::f64::consts::PI.powf(1.5)
        * reduced.powi(3)
        * (ell as f64).powf(11.0 / 6.0))
}

/// Which critical atom number a design curve pins to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DesignTarget {
    /// N0(pop) = 1 (population critical atom number).
    Population,
    /// N0(ph) = 1 (phase critical atom number).
    Phase,
}

impl DesignTarget {
    pub fn label(&self) -> &'static str {
        match self {
            DesignTarget::Population => "n0pop",
            DesignTarget::Phase => "n0ph",
        }
    }
}

/// One solved point of a radius vs required-Q design curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RadiusQPoint {
    pub radius: f64,
    pub q_required: f64,
    pub ell: i64,
    pub mode_volume: f64,
}

/// Required quality factor so the chosen critical atom number equals 1 for
/// this transition at this mode volume.
///
/// Closed form: Q = beta (T_spon / T) chi_L with T = T1 for the population
/// target and T = T2/2 for the phase target; no iteration is needed.
pub fn q_required(t: &IonTransition, mode_volume: f64, target: DesignTarget) -> f64 {
    let beta = coupling::beta_parameter(mode_volume, t.host_index, t.wavelength_vac());
    let chi = coupling::local_field_correction(t.host_index);
    let t_spon = coupling::spontaneous_time(t);
    let t_char = match target {
        DesignTarget::Population => t.t1(),
        DesignTarget::Phase => 0.5 * t.t2(),
    };
    beta * (t_spon / t_char) * chi
}

/// Solve the design curve over a radius grid.
///
/// Radii below the fundamental-mode cutoff yield a per-point error; the
/// rest of the curve is still returned.
pub fn radius_q_curve(
    t: &IonTransition,
    target: DesignTarget,
    radii: &[f64],
) -> Vec<(f64, Result<RadiusQPoint>)> {
    radii
        .iter()
        .map(|&radius| {
            let point = fundamental_mode_volume(radius, t.host_index, t.wavelength_vac()).map(
                |mode_volume| RadiusQPoint {
                    radius,
                    q_required: q_required(t, mode_volume, target),
                    ell: azimuthal_order(radius, t.host_index, t.wavelength_vac()),
                    mode_volume,
                },
            );
            (radius, point)
        })
        .collect()
}

/// Uniform grid helper for radius sweeps.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "grid needs at least two points");
    (0..points)
        .map(|i| min + (max - min) * i as f64 / (points - 1) as f64)
        .collect()
}
