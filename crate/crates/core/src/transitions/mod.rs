//! Chip-to-package transition models and closed-form predictors.
//!
//! * GSG transitions: a signal (bump) line plus a parasitic return-path
//!   line carrying the same loop current. The return path behaves as a
//!   series element `2jZ2·tan(θ2/2)` whose pole at θ2 = π produces a
//!   transmission zero independent of the terminations.
//! * Shielded stripline transitions: shunt pad capacitance, via line, shunt
//!   pad capacitance, with an optional series matching line.
//! * Substrate-integrated-waveguide cage cutoff of the stripline shield.

mod gsg;
mod matching;
mod siw;
mod stripline;

pub use gsg::{gsg_model, gsg_notch_freq, gsg_notch_harmonics, loop_radiation_freq, pitch_notch_estimate, ESTIMATE_LIGHT_SPEED};
pub use matching::{apply_series_match, design_series_match, MatchDesign, SearchRange, SeriesLineMatch};
pub use siw::{siw_cutoff_for, siw_effective_width, siw_te10_cutoff};
pub use stripline::stripline_transition_model;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netcore::NetError;
use crate::tline::TlineError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransitionError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Line(#[from] TlineError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty search range: {0}")]
    EmptySearch(String),
    #[error("design frequency {0} Hz lies outside the network sweep")]
    OutOfSweep(f64),
}

fn positive(name: &str, v: f64) -> Result<(), TransitionError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(TransitionError::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<(), TransitionError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(TransitionError::InvalidParameter(format!("{name} must be non-negative, got {v}")))
    }
}

/// Circuit parameters of a GSG transition: the vertical bump line (1) and
/// the horizontal return-path line (2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsgParams {
    /// Ω
    pub z1: f64,
    /// s
    pub tau1: f64,
    /// Ω
    pub z2: f64,
    /// s
    pub tau2: f64,
}

impl GsgParams {
    pub fn validate(&self) -> Result<(), TransitionError> {
        positive("z1", self.z1)?;
        positive("z2", self.z2)?;
        non_negative("tau1", self.tau1)?;
        non_negative("tau2", self.tau2)
    }
}

/// Footprint geometry of a GSG bump transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsgGeometry {
    /// Footprint-to-footprint distance, m.
    #[serde(rename = "H")]
    pub h: f64,
    /// Bump pitch, m.
    pub pitch: f64,
    /// Underfill relative permittivity.
    pub eps_r: f64,
}

impl GsgGeometry {
    pub fn validate(&self) -> Result<(), TransitionError> {
        positive("H", self.h)?;
        positive("pitch", self.pitch)?;
        positive("eps_r", self.eps_r)
    }
}

/// Via cage of a shielded stripline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiwGeometry {
    /// Centre-to-centre spacing of the two via rows, m.
    #[serde(rename = "W")]
    pub w: f64,
    /// Via diameter, m.
    #[serde(rename = "D")]
    pub d: f64,
    /// Via pitch along one row, m.
    #[serde(rename = "P")]
    pub p: f64,
    pub eps_r: f64,
}

impl SiwGeometry {
    pub fn validate(&self) -> Result<(), TransitionError> {
        positive("W", self.w)?;
        non_negative("D", self.d)?;
        positive("P", self.p)?;
        positive("eps_r", self.eps_r)?;
        if self.d >= self.p {
            return Err(TransitionError::InvalidParameter(format!(
                "via diameter {} must be smaller than via pitch {}",
                self.d, self.p
            )));
        }
        Ok(())
    }
}

/// Pad capacitances and via line of a shielded stripline transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StriplineTransitionParams {
    /// Capacitance of each pad, F.
    pub c_pad: f64,
    /// Via characteristic impedance, Ω.
    pub z_via: f64,
    /// Via delay, s.
    pub tau_via: f64,
}

impl StriplineTransitionParams {
    pub fn validate(&self) -> Result<(), TransitionError> {
        non_negative("c_pad", self.c_pad)?;
        positive("z_via", self.z_via)?;
        non_negative("tau_via", self.tau_via)
    }
}
