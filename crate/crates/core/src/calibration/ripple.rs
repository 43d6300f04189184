use serde::Serialize;

use super::CalError;
use crate::netcore::{Port, TwoPortNetwork};
use crate::units::C0;

/// Periodicity found in a reflection sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RippleReport {
    /// Mean spacing between ripple peaks, Hz.
    pub spacing_hz: f64,
    /// Line length whose round trip produces that spacing, m.
    pub implied_length_m: f64,
    pub peaks: usize,
}

/// Re(S_ii) with its least-squares straight line removed.
///
/// The real part is used because a single delayed reflection
/// `ρ·e^{−2jβl}` has constant magnitude: its period only shows in the
/// rotating phase.
fn detrended(net: &TwoPortNetwork, port: Port) -> Vec<f64> {
    let k = port.index() + 1;
    let f = net.grid().points();
    let y: Vec<f64> = net.s().iter().map(|m| m.at(k, k).re).collect();
    let n = f.len() as f64;
    let mf = f.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = f.iter().map(|x| (x - mf).powi(2)).sum();
    let slope = if sxx > 0.0 { f.iter().zip(&y).map(|(x, v)| (x - mf) * (v - my)).sum::<f64>() / sxx } else { 0.0 };
    f.iter().zip(&y).map(|(x, v)| v - my - slope * (x - mf)).collect()
}

/// Amplitude of the ripple on port `port`: √2 times the RMS of detrended
/// Re(S_ii), which is the amplitude of a pure sinusoid.
pub fn ripple_amplitude(net: &TwoPortNetwork, port: Port) -> f64 {
    let d = detrended(net, port);
    (2.0 * d.iter().map(|v| v * v).sum::<f64>() / d.len() as f64).sqrt()
}

/// Dominant ripple period of the reflection at `port` from the mean spacing
/// of its peaks, refined by parabolic interpolation, and the remnant line
/// length `c/(2·Δf·√εr)` that would cause it.
///
/// Needs at least three peaks.
pub fn ripple_spacing_diagnostic(net: &TwoPortNetwork, port: Port, eps_r: f64) -> Result<RippleReport, CalError> {
    if !(eps_r >= 1.0) || !eps_r.is_finite() {
        return Err(CalError::InvalidParameter(format!("eps_r must be >= 1, got {eps_r}")));
    }
    let f = net.grid().points();
    let y = detrended(net, port);
    let range = y.iter().cloned().fold(f64::MIN, f64::max) - y.iter().cloned().fold(f64::MAX, f64::min);
    let scale = net.s().iter().map(|m| m.max_abs()).fold(0.0, f64::max);
    if !(range > 1e-9 * scale.max(1e-300)) {
        return Err(CalError::NoPeriodicity("reflection is flat".into()));
    }
    // Only peaks in the upper half of the swing count.
    let threshold = y.iter().cloned().fold(f64::MAX, f64::min) + 0.5 * range;
    let mut peaks = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > threshold {
            let den = y[i - 1] - 2.0 * y[i] + y[i + 1];
            let off = if den != 0.0 { 0.5 * (y[i - 1] - y[i + 1]) / den } else { 0.0 };
            let step = if off >= 0.0 { f[i + 1] - f[i] } else { f[i] - f[i - 1] };
            peaks.push(f[i] + off * step);
        }
    }
    if peaks.len() < 3 {
        return Err(CalError::NoPeriodicity(format!("found {} ripple peaks, need at least 3", peaks.len())));
    }
    let spacing = (peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64;
    Ok(RippleReport {
        spacing_hz: spacing,
        implied_length_m: C0 / (2.0 * spacing * eps_r.sqrt()),
        peaks: peaks.len(),
    })
}
