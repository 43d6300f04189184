use super::{positive, SiwGeometry, TransitionError};
use crate::units::C0;

/// Equivalent solid-wall width of a via cage, `W − D²/(0.95·P)`.
pub fn siw_effective_width(g: &SiwGeometry) -> Result<f64, TransitionError> {
    g.validate()?;
    let w_eff = g.w - g.d * g.d / (0.95 * g.p);
    if w_eff <= 0.0 {
        return Err(TransitionError::InvalidParameter(format!(
            "non-physical cage: effective width {w_eff} m <= 0"
        )));
    }
    Ok(w_eff)
}

/// First TE cutoff of a rectangular guide of width `w_eff`.
pub fn siw_te10_cutoff(w_eff: f64, eps_r: f64) -> Result<f64, TransitionError> {
    positive("w_eff", w_eff)?;
    positive("eps_r", eps_r)?;
    Ok(C0 / (2.0 * w_eff * eps_r.sqrt()))
}

/// Cutoff of the cage described by `g`.
pub fn siw_cutoff_for(g: &SiwGeometry) -> Result<f64, TransitionError> {
    siw_te10_cutoff(siw_effective_width(g)?, g.eps_r)
}
