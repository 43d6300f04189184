//! Physical constants and unit conversions shared across the crate.

use std::f64::consts::{LN_10, PI};

/// Speed of light in vacuum, m/s.
pub const C0: f64 = 299_792_458.0;
/// Vacuum permeability, H/m.
pub const MU0: f64 = 4.0e-7 * PI;
/// Boltzmann constant, J/K.
pub const K_BOLTZMANN: f64 = 1.380_649e-23;
/// dB per neper (20 / ln 10).
pub const DB_PER_NEPER: f64 = 20.0 / LN_10;
/// Annealed copper conductivity, S/m.
pub const COPPER_CONDUCTIVITY: f64 = 5.8e7;

/// Power ratio to dB.
pub fn db10(x: f64) -> f64 {
    10.0 * x.log10()
}

/// dB to power ratio.
pub fn undb10(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Wave (amplitude) ratio to dB.
pub fn db20(x: f64) -> f64 {
    20.0 * x.log10()
}

/// dB to wave (amplitude) ratio.
pub fn undb20(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    undb10(dbm) * 1e-3
}

pub fn watts_to_dbm(w: f64) -> f64 {
    db10(w * 1e3)
}

/// Attenuation in Np/m to dB/mm.
pub fn np_per_m_to_db_per_mm(alpha: f64) -> f64 {
    alpha * DB_PER_NEPER * 1e-3
}

pub fn db_per_mm_to_np_per_m(alpha: f64) -> f64 {
    alpha / DB_PER_NEPER * 1e3
}

/// Phase constant in rad/m to deg/mm.
pub fn rad_per_m_to_deg_per_mm(beta: f64) -> f64 {
    beta.to_degrees() * 1e-3
}

pub fn deg_per_mm_to_rad_per_m(beta: f64) -> f64 {
    beta.to_radians() * 1e3
}
