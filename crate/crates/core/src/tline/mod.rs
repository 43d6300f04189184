//! Transmission-line two-ports, conductor roughness and propagation
//! constant extraction.

mod gamma;
mod huray;

pub use gamma::{average_gamma, extract_gamma, extract_gamma_with, unwrap_phase, PhaseAnchor, UNWRAP_LIMIT};
pub use huray::{apply_roughness, huray_factor, skin_depth, HurayParams};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netcore::{renormalize, FrequencyGrid, Mat2, NetError, TwoPortNetwork};
use crate::par;
use crate::units::{np_per_m_to_db_per_mm, rad_per_m_to_deg_per_mm};

/// Attenuation below zero but above this (Np/m) is measurement noise.
pub const ALPHA_NOISE_FLOOR: f64 = -1e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TlineError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("|S21| = 0 at index {index}; propagation constant undefined")]
    ZeroTransmission { index: usize },
    #[error("phase step of {step_deg:.1} deg between points {} and {index} is too close to 180 deg to unwrap; refine the grid", index - 1)]
    UnwrapAmbiguity { index: usize, step_deg: f64 },
}

/// Per-point attenuation classification for a [`PropagationConstant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlphaFlag {
    Passive,
    /// Slightly negative, within [`ALPHA_NOISE_FLOOR`].
    NoiseNegative,
    /// Negative beyond the noise floor.
    Active,
}

/// `γ = α + jβ` per grid point, α in Np/m and β in rad/m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationConstant {
    grid: FrequencyGrid,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl PropagationConstant {
    pub fn new(grid: FrequencyGrid, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self, TlineError> {
        for v in [&alpha, &beta] {
            if v.len() != grid.len() {
                return Err(NetError::LengthMismatch { expected: grid.len(), got: v.len() }.into());
            }
        }
        if alpha.iter().chain(&beta).any(|x| !x.is_finite()) {
            return Err(TlineError::InvalidParameter("non-finite propagation constant".into()));
        }
        Ok(PropagationConstant { grid, alpha, beta })
    }

    /// Lossless TEM line in a homogeneous dielectric: β = 2πf√εr / c.
    pub fn tem(grid: &FrequencyGrid, eps_r: f64, alpha: impl Fn(f64) -> f64) -> Result<Self, TlineError> {
        if !(eps_r >= 1.0) {
            return Err(TlineError::InvalidParameter(format!("eps_r must be >= 1, got {eps_r}")));
        }
        let beta = grid.iter().map(|f| 2.0 * PI * f * eps_r.sqrt() / crate::units::C0).collect();
        let alpha = grid.iter().map(alpha).collect();
        Self::new(grid.clone(), alpha, beta)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn gamma_at(&self, i: usize) -> Complex64 {
        Complex64::new(self.alpha[i], self.beta[i])
    }

    pub fn alpha_flags(&self) -> Vec<AlphaFlag> {
        self.alpha
            .iter()
            .map(|&a| {
                if a >= 0.0 {
                    AlphaFlag::Passive
                } else if a >= ALPHA_NOISE_FLOOR {
                    AlphaFlag::NoiseNegative
                } else {
                    AlphaFlag::Active
                }
            })
            .collect()
    }

    /// Rows of `(freq_hz, alpha_db_per_mm, beta_deg_per_mm)`.
    pub fn report_rows(&self) -> Vec<(f64, f64, f64)> {
        (0..self.len())
            .map(|i| {
                (
                    self.grid.get(i),
                    np_per_m_to_db_per_mm(self.alpha[i]),
                    rad_per_m_to_deg_per_mm(self.beta[i]),
                )
            })
            .collect()
    }

    /// Inverse of [`report_rows`](Self::report_rows).
    pub fn from_report_rows(rows: &[(f64, f64, f64)]) -> Result<Self, TlineError> {
        let grid = FrequencyGrid::new(rows.iter().map(|r| r.0).collect())?;
        let alpha = rows.iter().map(|r| crate::units::db_per_mm_to_np_per_m(r.1)).collect();
        let beta = rows.iter().map(|r| crate::units::deg_per_mm_to_rad_per_m(r.2)).collect();
        Self::new(grid, alpha, beta)
    }
}

/// Lossless line of impedance `z0` and delay `tau`, in reference `z0`:
/// S11 = S22 = 0, S21 = S12 = e^{−jθ}, θ = 2πfτ.
pub fn ideal_line(z0: f64, tau: f64, grid: &FrequencyGrid) -> Result<TwoPortNetwork, TlineError> {
    if !(z0 > 0.0) {
        return Err(TlineError::InvalidParameter(format!("line impedance must be positive, got {z0}")));
    }
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(TlineError::InvalidParameter(format!("delay must be non-negative, got {tau}")));
    }
    let s = par::map_slice(grid.points(), |&f| {
        let t = Complex64::from_polar(1.0, -2.0 * PI * f * tau);
        Mat2::new(Complex64::new(0.0, 0.0), t, t, Complex64::new(0.0, 0.0))
    });
    Ok(TwoPortNetwork::new(grid.clone(), s, [z0, z0])?)
}

/// [`ideal_line`] expressed in reference `z_ref` on both ports.
pub fn ideal_line_in(z0: f64, tau: f64, grid: &FrequencyGrid, z_ref: f64) -> Result<TwoPortNetwork, TlineError> {
    Ok(renormalize(&ideal_line(z0, tau, grid)?, [z_ref, z_ref])?)
}

/// Matched line section: S21 = S12 = e^{−γl}, no reflections, reference `z0`.
pub fn lossy_line(gamma: &PropagationConstant, z0: f64, length: f64) -> Result<TwoPortNetwork, TlineError> {
    if !(length >= 0.0) || !length.is_finite() {
        return Err(TlineError::InvalidParameter(format!("length must be non-negative, got {length}")));
    }
    matched_section(gamma, z0, length)
}

pub(crate) fn matched_section(gamma: &PropagationConstant, z0: f64, length: f64) -> Result<TwoPortNetwork, TlineError> {
    if !(z0 > 0.0) {
        return Err(TlineError::InvalidParameter(format!("line impedance must be positive, got {z0}")));
    }
    let s = par::map_indices(gamma.len(), |i| {
        let t = (-gamma.gamma_at(i) * length).exp();
        Mat2::new(Complex64::new(0.0, 0.0), t, t, Complex64::new(0.0, 0.0))
    });
    Ok(TwoPortNetwork::new(gamma.grid().clone(), s, [z0, z0])?)
}
