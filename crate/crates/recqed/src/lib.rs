//! Rare-earth-ion cavity QED toolkit for the bad-cavity regime.
//!
//! The crate bundles four pieces of machinery around a spectroscopic catalog
//! of rare-earth transitions:
//!
//! * [`coupling`] — figures of merit for an (ion, resonator) pair: transition
//!   dipole moment, two-level spontaneous-emission time, coupling strength
//!   `g`, cavity decay `kappa`, and the dimensionless critical atom numbers
//!   and saturation photon number.
//! * [`wgm`] — fundamental whispering-gallery mode volumes of dielectric
//!   spheres and the resonator design problem (radius vs required Q).
//! * [`dynamics`] — two cascaded lambda-system cavity nodes in the
//!   single-excitation subspace: photon "throw and catch" between nodes,
//!   including closed-form synthesis of the classical driving field.
//! * [`response`] — steady-state spectral response of the weakly driven
//!   atom-cavity system: conditional phase shift, spontaneous-emission
//!   spectra, and free-induction-decay style time-domain readout.
//!
//! All rates are angular (rad/s) throughout; the CLI layer also prints
//! Hz-equivalents (rate / 2π) where that helps.

// Validation guards use the negated form (`!(v > 0.0)`) on purpose: it
// rejects NaN, which `v <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod constants;
pub mod coupling;
pub mod dynamics;
pub mod pulse;
pub mod response;
pub mod units;
pub mod wgm;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
