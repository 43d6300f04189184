//! Huray "snowball" conductor roughness model.
//!
//! The conductor-loss multiplier is
//! `K(f) = 1 + (3/2)·SR / (1 + δ/a + δ²/(2a²))` with skin depth
//! `δ = 1/√(π f μ0 σ)`, nodule radius `a` and surface-area ratio `SR`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{PropagationConstant, TlineError};
use crate::netcore::NetError;
use crate::units::{COPPER_CONDUCTIVITY, MU0};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurayParams {
    /// Nodule radius, m.
    pub nodule_radius: f64,
    /// Nodule surface area relative to the flat area.
    pub surface_ratio: f64,
    /// Conductivity, S/m.
    #[serde(default = "default_conductivity")]
    pub conductivity: f64,
}

fn default_conductivity() -> f64 {
    COPPER_CONDUCTIVITY
}

impl HurayParams {
    pub fn new(nodule_radius: f64, surface_ratio: f64, conductivity: f64) -> Result<Self, TlineError> {
        let p = HurayParams { nodule_radius, surface_ratio, conductivity };
        p.validate()?;
        Ok(p)
    }

    /// Copper conductor.
    pub fn copper(nodule_radius: f64, surface_ratio: f64) -> Result<Self, TlineError> {
        Self::new(nodule_radius, surface_ratio, COPPER_CONDUCTIVITY)
    }

    pub fn validate(&self) -> Result<(), TlineError> {
        if !(self.nodule_radius > 0.0) {
            return Err(TlineError::InvalidParameter(format!("nodule radius must be positive, got {}", self.nodule_radius)));
        }
        if !(self.surface_ratio >= 0.0) {
            return Err(TlineError::InvalidParameter(format!("surface ratio must be >= 0, got {}", self.surface_ratio)));
        }
        if !(self.conductivity > 0.0) {
            return Err(TlineError::InvalidParameter(format!("conductivity must be positive, got {}", self.conductivity)));
        }
        Ok(())
    }
}

/// Skin depth of a non-magnetic conductor, m.
pub fn skin_depth(f: f64, conductivity: f64) -> f64 {
    1.0 / (PI * f * MU0 * conductivity).sqrt()
}

/// Roughness loss multiplier, in `[1, 1 + 1.5·SR)`.
pub fn huray_factor(f: f64, p: &HurayParams) -> f64 {
    let r = skin_depth(f, p.conductivity) / p.nodule_radius;
    1.0 + 1.5 * p.surface_ratio / (1.0 + r + 0.5 * r * r)
}

/// Scales the conductor part of the attenuation by K(f):
/// `α_out = α_c·K(f) + (α − α_c)`. β is unchanged.
pub fn apply_roughness(
    gamma_smooth: &PropagationConstant,
    alpha_conductor: &[f64],
    p: &HurayParams,
) -> Result<PropagationConstant, TlineError> {
    p.validate()?;
    if alpha_conductor.len() != gamma_smooth.len() {
        return Err(NetError::LengthMismatch { expected: gamma_smooth.len(), got: alpha_conductor.len() }.into());
    }
    if let Some(a) = alpha_conductor.iter().find(|a| !(**a >= 0.0)) {
        return Err(TlineError::InvalidParameter(format!("conductor attenuation must be >= 0, got {a}")));
    }
    let alpha = gamma_smooth
        .grid()
        .iter()
        .zip(gamma_smooth.alpha())
        .zip(alpha_conductor)
        .map(|((f, &a), &ac)| a + ac * (huray_factor(f, p) - 1.0))
        .collect();
    PropagationConstant::new(gamma_smooth.grid().clone(), alpha, gamma_smooth.beta().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::FrequencyGrid;

    fn paper_like() -> HurayParams {
        HurayParams::copper(0.25e-6, 4.0).unwrap()
    }

    #[test]
    fn limits() {
        let p = paper_like();
        assert!((huray_factor(1e-20, &p) - 1.0).abs() < 1e-6);
        assert!((huray_factor(1e30, &p) - 7.0).abs() < 1e-6);
    }

    #[test]
    fn skin_depth_equal_to_radius() {
        let p = paper_like();
        // δ = a  ⇔  f = 1/(π μ0 σ a²)
        let f = 1.0 / (PI * MU0 * p.conductivity * p.nodule_radius.powi(2));
        assert!((f / 1e9 - 69.88).abs() < 0.01);
        assert!((huray_factor(f, &p) - 3.4).abs() < 1e-9);
    }

    #[test]
    fn smooth_conductor_is_identity() {
        let grid = FrequencyGrid::linspace(1e9, 100e9, 5).unwrap();
        let g = PropagationConstant::tem(&grid, 3.1, |f| 1e-10 * f).unwrap();
        let p = HurayParams::copper(0.25e-6, 0.0).unwrap();
        let out = apply_roughness(&g, g.alpha(), &p).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn conductor_loss_is_scaled() {
        let p = paper_like();
        let f = 1.0 / (PI * MU0 * p.conductivity * p.nodule_radius.powi(2));
        let grid = FrequencyGrid::single(f).unwrap();
        let g = PropagationConstant::new(grid, vec![2.0], vec![1000.0]).unwrap();
        let out = apply_roughness(&g, &[2.0], &p).unwrap();
        assert!((out.alpha()[0] - 6.8).abs() < 1e-9);
        assert_eq!(out.beta(), g.beta());
        let partial = apply_roughness(&g, &[0.5], &p).unwrap();
        assert!((partial.alpha()[0] - (1.5 + 0.5 * 3.4)).abs() < 1e-9);
    }

    #[test]
    fn invalid_parameters() {
        assert!(HurayParams::copper(0.0, 4.0).is_err());
        assert!(HurayParams::copper(1e-6, -1.0).is_err());
        assert!(HurayParams::new(1e-6, 1.0, 0.0).is_err());
    }
}
