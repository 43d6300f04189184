use std::f64::consts::PI;

use super::{PropagationConstant, TlineError};
use crate::netcore::{NetError, TwoPortNetwork};

/// Largest wrapped phase step accepted between adjacent points. Steps
/// closer to ±π than this cannot be told apart from a step the other way.
pub const UNWRAP_LIMIT: f64 = 0.9 * PI;

/// Where the absolute phase branch is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseAnchor {
    /// Principal branch at the lowest frequency (requires βl < π there).
    #[default]
    LowestPoint,
    /// Shift the unwrapped phase by whole turns so that its least-squares
    /// line through the sweep passes closest to zero at DC. Suits TEM-like
    /// lines whose phase is proportional to frequency.
    DcIntercept,
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Continuity unwrapping: each point takes the 2π branch nearest the
/// previous one. Fails at the first index whose wrapped step exceeds
/// `limit`.
pub fn unwrap_phase(phase: &[f64], limit: f64) -> Result<Vec<f64>, (usize, f64)> {
    let mut out = Vec::with_capacity(phase.len());
    let mut prev = match phase.first() {
        Some(&p) => p,
        None => return Ok(out),
    };
    out.push(prev);
    for (i, &p) in phase.iter().enumerate().skip(1) {
        let d = wrap(p - prev);
        if d.abs() > limit {
            return Err((i, d));
        }
        prev += d;
        out.push(prev);
    }
    Ok(out)
}

/// γ = −ln(S21)/l with the default [`PhaseAnchor::LowestPoint`].
pub fn extract_gamma(net: &TwoPortNetwork, length: f64) -> Result<PropagationConstant, TlineError> {
    extract_gamma_with(net, length, PhaseAnchor::LowestPoint)
}

/// γ = −ln(S21)/l from a line measured in its own characteristic
/// impedance. Unwrapping is sequential over the grid.
pub fn extract_gamma_with(net: &TwoPortNetwork, length: f64, anchor: PhaseAnchor) -> Result<PropagationConstant, TlineError> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(TlineError::InvalidParameter(format!("line length must be positive, got {length}")));
    }
    let s21 = net.param(2, 1);
    if let Some(index) = s21.iter().position(|t| t.norm() == 0.0 || !t.is_finite()) {
        return Err(TlineError::ZeroTransmission { index });
    }
    let alpha = s21.iter().map(|t| -t.norm().ln() / length).collect();
    // Electrical length θ = βl = −arg S21.
    let wrapped: Vec<f64> = s21.iter().map(|t| -t.arg()).collect();
    let mut theta = unwrap_phase(&wrapped, UNWRAP_LIMIT)
        .map_err(|(index, d)| TlineError::UnwrapAmbiguity { index, step_deg: d.to_degrees() })?;
    if anchor == PhaseAnchor::DcIntercept {
        let shift = dc_intercept(net.grid().points(), &theta);
        let turns = (shift / (2.0 * PI)).round();
        theta.iter_mut().for_each(|t| *t -= turns * 2.0 * PI);
    }
    let beta = theta.into_iter().map(|t| t / length).collect();
    PropagationConstant::new(net.grid().clone(), alpha, beta)
}

fn dc_intercept(f: &[f64], y: &[f64]) -> f64 {
    if f.len() < 2 {
        return 0.0;
    }
    let n = f.len() as f64;
    let mf = f.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = f.iter().zip(y).map(|(x, y)| (x - mf) * (y - my)).sum();
    let sxx: f64 = f.iter().map(|x| (x - mf) * (x - mf)).sum();
    my - sxy / sxx * mf
}

/// Point-wise mean of two propagation constants on the same grid.
pub fn average_gamma(a: &PropagationConstant, b: &PropagationConstant) -> Result<PropagationConstant, TlineError> {
    if !a.grid().matches(b.grid()) {
        return Err(NetError::GridMismatch.into());
    }
    let mean = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| 0.5 * (p + q)).collect();
    PropagationConstant::new(a.grid().clone(), mean(a.alpha(), b.alpha()), mean(a.beta(), b.beta()))
}
