use super::{positive, GsgGeometry, GsgParams, TransitionError};
use crate::netcore::{cascade, loop_series_element, FrequencyGrid, TwoPortNetwork};
use crate::tline::{ideal_line, ideal_line_in};

/// Rounded speed of light used by the pitch-based notch estimate, m/s.
pub const ESTIMATE_LIGHT_SPEED: f64 = 3.0e8;

/// Lossless GSG transition: the bump line in cascade with the series
/// element formed by the return-path line, in reference `z_ref`.
pub fn gsg_model(p: &GsgParams, grid: &FrequencyGrid, z_ref: f64) -> Result<TwoPortNetwork, TransitionError> {
    p.validate()?;
    let signal = ideal_line_in(p.z1, p.tau1, grid, z_ref)?;
    let ret = loop_series_element(&ideal_line(p.z2, p.tau2, grid)?, z_ref)?;
    Ok(cascade(&signal, &ret)?)
}

/// First transmission zero of the GSG model, `1/(2τ2)`.
pub fn gsg_notch_freq(tau2: f64) -> Result<f64, TransitionError> {
    positive("tau2", tau2)?;
    Ok(1.0 / (2.0 * tau2))
}

/// The first `n` zeros: odd multiples of `1/(2τ2)`.
pub fn gsg_notch_harmonics(tau2: f64, n: usize) -> Result<Vec<f64>, TransitionError> {
    let f = gsg_notch_freq(tau2)?;
    Ok((0..n).map(|k| (2 * k + 1) as f64 * f).collect())
}

/// Resonance of the parasitic current loop, `1/(2(τ1 + τ2))`.
///
/// The lossless circuit cannot show the radiation this resonance feeds, so
/// this is a predictor only.
pub fn loop_radiation_freq(tau1: f64, tau2: f64) -> Result<f64, TransitionError> {
    super::non_negative("tau1", tau1)?;
    positive("tau2", tau2)?;
    Ok(1.0 / (2.0 * (tau1 + tau2)))
}

/// Loop resonance estimated from footprint geometry: the loop spans
/// `H + pitch` in a medium of permittivity `eps_r`.
pub fn pitch_notch_estimate(g: &GsgGeometry) -> Result<f64, TransitionError> {
    g.validate()?;
    Ok(ESTIMATE_LIGHT_SPEED / g.eps_r.sqrt() / (2.0 * (g.h + g.pitch)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::renormalize;

    #[test]
    fn notch_closed_forms() {
        assert!((gsg_notch_freq(1e-12).unwrap() - 500e9).abs() < 1e-3);
        let h = gsg_notch_harmonics(2e-12, 2).unwrap();
        assert!((h[0] - 250e9).abs() < 1e-3 && (h[1] - 750e9).abs() < 1e-3);
        assert!(gsg_notch_freq(0.0).is_err());
    }

    #[test]
    fn loop_radiation() {
        assert!((loop_radiation_freq(0.2e-12, 0.8e-12).unwrap() - 500e9).abs() < 1e-3);
        assert_eq!(loop_radiation_freq(0.0, 1.3e-12).unwrap(), gsg_notch_freq(1.3e-12).unwrap());
        assert!(loop_radiation_freq(0.1e-12, 1.0e-12).unwrap() < gsg_notch_freq(1.0e-12).unwrap());
    }

    #[test]
    fn pitch_estimate_reference_geometry() {
        let g = GsgGeometry { h: 125e-6, pitch: 150e-6, eps_r: 3.1 };
        let f = pitch_notch_estimate(&g).unwrap();
        assert!((f / 1e9 - 309.797).abs() < 1e-3);
    }

    #[test]
    fn pitch_estimate_inverts_in_vacuum() {
        let f = 200e9;
        let span = ESTIMATE_LIGHT_SPEED / (2.0 * f);
        let g = GsgGeometry { h: 0.4 * span, pitch: 0.6 * span, eps_r: 1.0 };
        assert!((pitch_notch_estimate(&g).unwrap() - f).abs() < 1e-3);
    }

    #[test]
    fn transmission_zero_at_half_period() {
        let grid = FrequencyGrid::single(500e9).unwrap();
        for (z1, z2) in [(20.0, 90.0), (70.0, 30.0), (50.0, 50.0)] {
            let p = GsgParams { z1, tau1: 0.37e-12, z2, tau2: 1e-12 };
            let net = gsg_model(&p, &grid, 50.0).unwrap();
            assert!(net.s()[0].at(2, 1).norm() <= 1e-6);
            let r = renormalize(&net, [13.0, 140.0]).unwrap();
            assert!(r.s()[0].at(2, 1).norm() <= 1e-6);
        }
    }

    #[test]
    fn vanishing_return_path_is_signal_line() {
        let grid = FrequencyGrid::linspace(10e9, 400e9, 40).unwrap();
        let p = GsgParams { z1: 35.0, tau1: 0.8e-12, z2: 60.0, tau2: 0.0 };
        let net = gsg_model(&p, &grid, 50.0).unwrap();
        let line = ideal_line_in(35.0, 0.8e-12, &grid, 50.0).unwrap();
        assert!(net.max_abs_diff(&line) < 1e-14);
    }
}
