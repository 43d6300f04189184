use std::f64::consts::PI;

use num_complex::Complex64;

use super::{StriplineTransitionParams, TransitionError};
use crate::netcore::{cascade, shunt_admittance, FrequencyGrid, TwoPortNetwork};
use crate::tline::ideal_line_in;

/// Pad capacitance, via line, pad capacitance, in reference `z_ref`.
pub fn stripline_transition_model(
    p: &StriplineTransitionParams,
    grid: &FrequencyGrid,
    z_ref: f64,
) -> Result<TwoPortNetwork, TransitionError> {
    p.validate()?;
    let y: Vec<Complex64> = grid.iter().map(|f| Complex64::new(0.0, 2.0 * PI * f * p.c_pad)).collect();
    let pad = shunt_admittance(grid, &y, z_ref)?;
    let via = ideal_line_in(p.z_via, p.tau_via, grid, z_ref)?;
    Ok(cascade(&cascade(&pad, &via)?, &pad)?)
}
