//! Physical constants (CODATA 2022).

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817_646_156_5e-34;

/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Electron mass (kg).
pub const M_E: f64 = 9.109_383_713_9e-31;

/// Vacuum permittivity (F/m).
pub const EPS_0: f64 = 8.854_187_818_8e-12;

/// Speed of light in vacuum (m/s).
pub const C_LIGHT: f64 = 2.997_924_58e8;
