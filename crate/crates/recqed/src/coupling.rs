//! Cavity-QED figures of merit for an (ion, resonator) pair.
//!
//! Conventions: all rates are angular (rad/s); wavelengths are vacuum values
//! with refractive-index factors written out explicitly, so the in-medium
//! wavelength never appears. The transition angular frequency used for both
//! the dipole moment and the coupling strength is 2*pi*c/lambda.

use serde::Serialize;

use crate::catalog::IonTransition;
use crate::constants::{C_LIGHT, EPS_0, E_CHARGE, HBAR, M_E};
use crate::wgm::ResonatorSpec;
use crate::{Error, Result};

/// Relative tolerance for the closed-form vs rate-form cross-check of the
/// dimensionless numbers. The two routes are algebraically identical, so
/// anything beyond a few ulp indicates a broken formula.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// Local correction to the electric field, chi_L = ((n^2 + 2)/3)^2.
///
/// Accounts for the dopant being less polarizable than the bulk host.
pub fn local_field_correction(n: f64) -> f64 {
    let x = (n * n + 2.0) / 3.0;
    x * x
}

/// Transition dipole moment (C m) from the oscillator strength:
/// mu = sqrt(3 hbar e^2 n f / (2 m_e omega chi_L)).
pub fn dipole_moment(t: &IonTransition) -> f64 {
    let omega = t.angular_frequency();
    let chi = local_field_correction(t.host_index);
    let mu_sq = 3.0 * HBAR * E_CHARGE * E_CHARGE * t.host_index * t.oscillator_strength
        / (2.0 * M_E * omega * chi);
    mu_sq.sqrt()
}

/// Two-level spontaneous-emission time (s):
/// T_spon = 3 eps0 hbar lambda^3 / (8 pi^2 n chi_L mu^2).
///
/// This is the radiative lifetime the transition would have if the two
/// levels were alone; the measured T1 is usually much shorter because of
/// decay into other levels followed by phonon relaxation.
pub fn spontaneous_time(t: &IonTransition) -> f64 {
    let mu = dipole_moment(t);
    let chi = local_field_correction(t.host_index);
    let lam3 = t.wavelength_vac().powi(3);
    3.0 * EPS_0 * HBAR * lam3 / (8.0 * std::f64::consts::PI.powi(2) * t.host_index * chi * mu * mu)
}

/// Cavity field decay rate kappa = pi c / (lambda Q) (rad/s).
pub fn cavity_kappa(wavelength_vac: f64, q: f64) -> f64 {
    std::f64::consts::PI * C_LIGHT / (wavelength_vac * q)
}

/// Single-photon coupling strength g = (mu/n) sqrt(omega_a / (2 hbar eps0 V))
/// (rad/s) for mode volume `mode_volume` (m^3).
pub fn coupling_g(t: &IonTransition, mode_volume: f64) -> f64 {
    let mu = dipole_moment(t);
    let omega_a = t.angular_frequency();
    (mu / t.host_index) * (omega_a / (2.0 * HBAR * EPS_0 * mode_volume)).sqrt()
}

/// Dimensionless mode volume beta = 8 pi^2 n^3 V / (3 lambda^3).
pub fn beta_parameter(mode_volume: f64, n: f64, wavelength_vac: f64) -> f64 {
    8.0 * std::f64::consts::PI.powi(2) * n.powi(3) * mode_volume / (3.0 * wavelength_vac.powi(3))
}

/// Cooperativity C = 2 g^2 / (kappa gamma).
pub fn cooperativity(g: f64, kappa: f64, gamma: f64) -> f64 {
    2.0 * g * g / (kappa * gamma)
}

/// Raw rates of an atom-cavity system (all angular, rad/s).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatesInput {
    /// Single-photon coupling.
    pub g: f64,
    /// Cavity field decay.
    pub kappa: f64,
    /// Population decay gamma = 1/T1.
    pub gamma: f64,
    /// Excess dephasing (0 for a lifetime-limited transition).
    pub gamma_p: f64,
}

impl RatesInput {
    pub fn new(g: f64, kappa: f64, gamma: f64) -> Self {
        RatesInput {
            g,
            kappa,
            gamma,
            gamma_p: 0.0,
        }
    }

    pub fn with_gamma_p(mut self, gamma_p: f64) -> Self {
        self.gamma_p = gamma_p;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("gamma_p", self.gamma_p),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name: name.to_string(),
                    message: format!("must be a finite non-negative rate, got {v}"),
                });
            }
        }
        Ok(())
    }

    /// Homogeneous linewidth gamma_h = gamma/2 + gamma_p.
    pub fn gamma_h(&self) -> f64 {
        0.5 * self.gamma + self.gamma_p
    }

    /// Population critical atom number N0(pop) = gamma kappa / g^2.
    pub fn n0_pop(&self) -> f64 {
        self.gamma * self.kappa / (self.g * self.g)
    }

    /// Phase critical atom number N0(ph) = 2 gamma_h kappa / g^2.
    pub fn n0_ph(&self) -> f64 {
        2.0 * self.gamma_h() * self.kappa / (self.g * self.g)
    }

    /// Saturation photon number n0 = gamma gamma_h / (4 g^2).
    ///
    /// Reduces to gamma^2 / (8 g^2) when gamma_p = 0.
    pub fn n0_sat(&self) -> f64 {
        self.gamma * self.gamma_h() / (4.0 * self.g * self.g)
    }
}

/// Full derived bundle for an (ion, resonator) pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CavityFigures {
    /// Transition dipole moment (C m).
    pub mu: f64,
    /// Two-level spontaneous-emission time (s).
    pub t_spon: f64,
    /// Local field correction chi_L.
    pub chi_l: f64,
    /// Dimensionless mode volume beta.
    pub beta: f64,
    /// Mode volume (m^3).
    pub mode_volume: f64,
    /// Coupling strength (rad/s).
    pub g: f64,
    /// Cavity decay (rad/s).
    pub kappa: f64,
    /// Population decay gamma = 1/T1 (rad/s).
    pub gamma: f64,
    /// Homogeneous linewidth gamma_h = 1/T2 (rad/s).
    pub gamma_h: f64,
    /// Population critical atom number.
    pub n0_pop: f64,
    /// Phase critical atom number.
    pub n0_ph: f64,
    /// Saturation photon number.
    pub n0_sat: f64,
    /// Cooperativity 2 g^2/(kappa gamma) = 2/N0(pop).
    pub cooperativity: f64,
}

/// Compute all figures of merit for a transition in a resonator.
///
/// The resonator must describe the same monolithic host the ion sits in,
/// so its refractive index and design wavelength have to match the
/// transition (use [`ResonatorSpec::for_transition`]). The dimensionless
/// numbers are computed through two algebraically identical routes
/// (closed forms in beta, T_spon, Q and rate forms in g, kappa, gamma) and
/// cross-checked to [`CROSS_CHECK_TOL`].
pub fn figures(t: &IonTransition, resonator: &ResonatorSpec) -> Result<CavityFigures> {
    resonator.validate()?;
    if (resonator.wavelength_vac - t.wavelength_vac()).abs() > 1e-9 * t.wavelength_vac() {
        return Err(Error::InconsistentResonator {
            field: "wavelength_vac",
        });
    }
    if (resonator.n - t.host_index).abs() > 1e-9 * t.host_index {
        return Err(Error::InconsistentResonator { field: "n" });
    }

    let mode_volume = resonator.mode_volume()?;
    let mu = dipole_moment(t);
    let t_spon = spontaneous_time(t);
    let chi_l = local_field_correction(t.host_index);
    let beta = beta_parameter(mode_volume, t.host_index, t.wavelength_vac());
    let g = coupling_g(t, mode_volume);
    let kappa = cavity_kappa(t.wavelength_vac(), resonator.q);

    let rates = RatesInput {
        g,
        kappa,
        gamma: t.gamma(),
        gamma_p: t.gamma_p(),
    };

    // Closed forms in (beta, Q, T_spon, T1, T2, chi_L).
    let n0_pop_beta = beta / resonator.q * (t_spon / t.t1()) * chi_l;
    let n0_ph_beta = 2.0 * beta / resonator.q * (t_spon / t.t2()) * chi_l;
    let n0_sat_beta = t.wavelength_vac() * beta / (4.0 * std::f64::consts::PI * C_LIGHT) * t_spon
        / (t.t1() * t.t2())
        * chi_l;

    for (name, lhs, rhs) in [
        ("N0(pop)", n0_pop_beta, rates.n0_pop()),
        ("N0(ph)", n0_ph_beta, rates.n0_ph()),
        ("n0", n0_sat_beta, rates.n0_sat()),
    ] {
        let rel = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
        if rel > CROSS_CHECK_TOL {
            return Err(Error::CrossCheckFailed {
                name,
                rel,
                tol: CROSS_CHECK_TOL,
            });
        }
    }

    Ok(CavityFigures {
        mu,
        t_spon,
        chi_l,
        beta,
        mode_volume,
        g,
        kappa,
        gamma: rates.gamma,
        gamma_h: rates.gamma_h(),
        n0_pop: n0_pop_beta,
        n0_ph: n0_ph_beta,
        n0_sat: n0_sat_beta,
        cooperativity: cooperativity(g, kappa, rates.gamma),
    })
}
