//! Line-of-sight link budget: SNR of a phased-array link, aggregate Shannon
//! capacity over beams and polarisations, and its sensitivity to the
//! chip-to-antenna transition loss.
//!
//! The SNR expression is evaluated literally, term by term:
//!
//! ```text
//! SNR = [P_tx·G_t·N_ant² / (4π·d²·IL)] · [c²·G_r·N_ant² / (4π·f0²·IL)] · [1 / (k_B·T·B·F·N_ant)]
//! ```
//!
//! so SNR scales as N_ant³ overall and as 1/IL², since the transition loss
//! is paid once at each end of the link.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par;
use crate::units::{undb10, C0, K_BOLTZMANN};

/// Reference noise temperature, K.
pub const DEFAULT_TEMPERATURE: f64 = 290.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE
}

/// Link parameters in linear SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBudgetConfig {
    /// Transmit power per element after back-off, W.
    pub p_tx: f64,
    /// Element gains, linear.
    pub g_t: f64,
    pub g_r: f64,
    pub n_ant: u32,
    pub n_beams: u32,
    pub n_pol: u32,
    /// Bandwidth, Hz.
    pub b: f64,
    /// Carrier, Hz.
    pub f0: f64,
    /// Link distance, m.
    pub d: f64,
    /// Receiver noise factor, linear.
    pub noise_factor: f64,
    /// Noise temperature, K.
    #[serde(default = "default_temperature")]
    pub temperature: f64,
}

impl LinkBudgetConfig {
    /// 140 GHz base station: +4 dBm, 5 dB elements, 16 antennas, 8 beams,
    /// 2 polarisations, 20 GHz bandwidth, 5 m, 10 dB noise figure, 290 K.
    pub fn base_station_140ghz() -> Self {
        LinkBudgetConfig {
            p_tx: 1e-3 * undb10(4.0),
            g_t: undb10(5.0),
            g_r: undb10(5.0),
            n_ant: 16,
            n_beams: 8,
            n_pol: 2,
            b: 20e9,
            f0: 140e9,
            d: 5.0,
            noise_factor: undb10(10.0),
            temperature: DEFAULT_TEMPERATURE,
        }
    }

    pub fn validate(&self) -> Result<(), LinkError> {
        let reals = [
            ("p_tx", self.p_tx),
            ("g_t", self.g_t),
            ("g_r", self.g_r),
            ("b", self.b),
            ("f0", self.f0),
            ("d", self.d),
            ("noise_factor", self.noise_factor),
            ("temperature", self.temperature),
        ];
        for (name, v) in reals {
            if !(v > 0.0) || !v.is_finite() {
                return Err(LinkError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("n_ant", self.n_ant), ("n_beams", self.n_beams), ("n_pol", self.n_pol)] {
            if v == 0 {
                return Err(LinkError::InvalidParameter(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    fn streams(&self) -> f64 {
        self.n_beams as f64 * self.n_pol as f64
    }
}

/// One row of a capacity-versus-loss sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityPoint {
    /// One-way transition loss, dB.
    pub il_db: f64,
    pub snr_linear: f64,
    /// `N_beams·N_pol·B·log2(1 + SNR/N_beams)`, bit/s.
    pub c_exact: f64,
    /// `N_beams·N_pol·B·log2(SNR/N_beams)`, floored at zero, bit/s.
    pub c_approx: f64,
}

fn check_loss(il_linear: f64) -> Result<(), LinkError> {
    if il_linear >= 1.0 && il_linear.is_finite() {
        Ok(())
    } else {
        Err(LinkError::InvalidParameter(format!("insertion loss must be >= 1 (linear), got {il_linear}")))
    }
}

/// Linear SNR with a one-way transition loss `il_linear` at each end.
pub fn snr(cfg: &LinkBudgetConfig, il_linear: f64) -> Result<f64, LinkError> {
    cfg.validate()?;
    check_loss(il_linear)?;
    let n = cfg.n_ant as f64;
    let power_density = cfg.p_tx * cfg.g_t * n * n / (4.0 * PI * cfg.d * cfg.d * il_linear);
    let rx_area = C0 * C0 * cfg.g_r * n * n / (4.0 * PI * cfg.f0 * cfg.f0 * il_linear);
    let noise = K_BOLTZMANN * cfg.temperature * cfg.b * cfg.noise_factor * n;
    Ok(power_density * rx_area / noise)
}

/// Aggregate capacity `(exact, high-SNR approximation)`, bit/s. The
/// approximation is clamped at zero where SNR/N_beams < 1.
pub fn capacity(cfg: &LinkBudgetConfig, il_linear: f64) -> Result<(f64, f64), LinkError> {
    let x = snr(cfg, il_linear)? / cfg.n_beams as f64;
    let k = cfg.streams() * cfg.b;
    Ok((k * x.ln_1p() / std::f64::consts::LN_2, (k * x.log2()).max(0.0)))
}

/// High-SNR slope of capacity against transition loss in dB, bit/s/dB:
/// `−(2·log2(10)/10)·N_beams·N_pol·B`. Negative: capacity falls with loss.
pub fn sensitivity(cfg: &LinkBudgetConfig) -> f64 {
    -(2.0 * 10f64.log2() / 10.0) * cfg.streams() * cfg.b
}

/// Capacity at `start, start + step, …, ≤ stop` dB of one-way loss.
pub fn capacity_sweep(cfg: &LinkBudgetConfig, start_db: f64, stop_db: f64, step_db: f64) -> Result<Vec<CapacityPoint>, LinkError> {
    cfg.validate()?;
    if !(step_db > 0.0) || !(stop_db >= start_db) || !(start_db >= 0.0) || !stop_db.is_finite() {
        return Err(LinkError::InvalidParameter(format!(
            "sweep needs 0 <= start <= stop and step > 0, got {start_db}:{stop_db}:{step_db}"
        )));
    }
    let n = ((stop_db - start_db) / step_db + 1e-9).floor() as usize + 1;
    par::map_indices(n, |i| {
        let il_db = start_db + step_db * i as f64;
        let il = undb10(il_db);
        let snr_linear = snr(cfg, il)?;
        let (c_exact, c_approx) = capacity(cfg, il)?;
        Ok(CapacityPoint { il_db, snr_linear, c_exact, c_approx })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> LinkBudgetConfig {
        LinkBudgetConfig::base_station_140ghz()
    }

    #[test]
    fn reference_snr_regression() {
        // Independent evaluation of the three link terms for the 140 GHz
        // base-station parameters.
        let s = snr(&cfg(), 1.0).unwrap();
        assert!((s - 149.236).abs() < 1e-3, "{s}");
    }

    #[test]
    fn loss_and_distance_scaling() {
        let c = cfg();
        let s0 = snr(&c, 1.0).unwrap();
        assert!((snr(&c, 2.0).unwrap() * 4.0 / s0 - 1.0).abs() < 1e-12);
        let far = LinkBudgetConfig { d: 2.0 * c.d, ..c };
        assert!((snr(&far, 1.0).unwrap() * 4.0 / s0 - 1.0).abs() < 1e-12);
        let hot = LinkBudgetConfig { p_tx: 2.0 * c.p_tx, ..c };
        assert!((snr(&hot, 1.0).unwrap() / s0 - 2.0).abs() < 1e-12);
        let big = LinkBudgetConfig { n_ant: 4 * c.n_ant, ..c };
        assert!((snr(&big, 1.0).unwrap() / s0 - 64.0).abs() < 1e-9);
    }

    #[test]
    fn capacity_at_unit_per_beam_snr() {
        let c = cfg();
        let s0 = snr(&c, 1.0).unwrap();
        // Choose IL so that SNR/N_beams = 1.
        let il = (s0 / c.n_beams as f64).sqrt();
        let (exact, approx) = capacity(&c, il).unwrap();
        assert!((exact - 8.0 * 2.0 * 20e9).abs() < 1e-3);
        assert!(approx.abs() < 1e-3);
    }

    #[test]
    fn exact_dominates_approximation() {
        let c = cfg();
        for il_db in [0.0, 1.0, 3.0, 6.0, 12.0] {
            let (e, a) = capacity(&c, undb10(il_db)).unwrap();
            assert!(e >= a);
        }
        let loud = LinkBudgetConfig { p_tx: 1e6, ..c };
        let (e, a) = capacity(&loud, 1.0).unwrap();
        assert!((e - a) / e < 1e-4);
        assert!(capacity(&c, 1.0).unwrap().0 >= 1e12);
    }

    #[test]
    fn sensitivity_values() {
        assert!((sensitivity(&cfg()) / 1e9 + 212.603).abs() < 1e-3);
        let unit = LinkBudgetConfig { n_beams: 1, n_pol: 1, b: 1.0, ..cfg() };
        assert!((sensitivity(&unit) + 0.664_385_6).abs() < 1e-7);
        let wide = LinkBudgetConfig { b: 40e9, ..cfg() };
        assert!((sensitivity(&wide) / sensitivity(&cfg()) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sweep_is_monotone() {
        let pts = capacity_sweep(&cfg(), 0.0, 6.0, 0.25).unwrap();
        assert_eq!(pts.len(), 25);
        assert!(pts.windows(2).all(|w| w[1].c_exact < w[0].c_exact));
        for p in &pts {
            if p.snr_linear / 8.0 > 100.0 {
                assert!((p.c_exact - p.c_approx) / p.c_exact < 0.01);
            }
        }
    }

    #[test]
    fn rejects_gain_and_bad_config() {
        assert!(snr(&cfg(), 0.5).is_err());
        assert!(snr(&LinkBudgetConfig { n_beams: 0, ..cfg() }, 1.0).is_err());
        assert!(capacity_sweep(&cfg(), 3.0, 1.0, 0.1).is_err());
    }
}
