use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{positive, TransitionError};
use crate::netcore::{cascade, Port, TwoPortNetwork};
use crate::par;
use crate::tline::ideal_line_in;

/// Series transmission line inserted at one port: impedance `z0`, electrical
/// length `theta_deg` at `f0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesLineMatch {
    pub z0: f64,
    pub theta_deg: f64,
    pub f0: f64,
}

impl SeriesLineMatch {
    pub fn validate(&self) -> Result<(), TransitionError> {
        positive("z0", self.z0)?;
        positive("f0", self.f0)?;
        super::non_negative("theta_deg", self.theta_deg)
    }

    /// Line delay, s.
    pub fn tau(&self) -> f64 {
        self.theta_deg / 360.0 / self.f0
    }
}

/// Inclusive arithmetic range `start, start + step, …, ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SearchRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, TransitionError> {
        let r = SearchRange { start, stop, step };
        r.validate()?;
        Ok(r)
    }

    /// 10 Ω to 100 Ω in 0.5 Ω steps.
    pub fn default_impedance() -> Self {
        SearchRange { start: 10.0, stop: 100.0, step: 0.5 }
    }

    /// 0° to 90° in 0.25° steps.
    pub fn default_length_deg() -> Self {
        SearchRange { start: 0.0, stop: 90.0, step: 0.25 }
    }

    fn validate(&self) -> Result<(), TransitionError> {
        if !(self.step > 0.0) || !self.start.is_finite() || !self.stop.is_finite() || self.stop < self.start {
            return Err(TransitionError::EmptySearch(format!(
                "start {} stop {} step {}",
                self.start, self.stop, self.step
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + self.step * k as f64).collect()
    }
}

/// Outcome of [`design_series_match`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchDesign {
    pub matched: SeriesLineMatch,
    /// |S_ii| at f0 with the line in place.
    pub reflection: f64,
    /// |S_ii| at f0 without it.
    pub unmatched_reflection: f64,
}

/// Cascades the matching line onto `side` of `net`, in that port's
/// reference impedance.
pub fn apply_series_match(net: &TwoPortNetwork, m: &SeriesLineMatch, side: Port) -> Result<TwoPortNetwork, TransitionError> {
    m.validate()?;
    let z_ref = net.z_ref()[side.index()];
    let line = ideal_line_in(m.z0, m.tau(), net.grid(), z_ref)?;
    Ok(match side {
        Port::One => cascade(&line, net)?,
        Port::Two => cascade(net, &line)?,
    })
}

/// Reflection seen through a line `(z0, θ)` towards a load `gamma` in `z_ref`.
fn through_line(gamma: Complex64, z0: f64, theta: f64, z_ref: f64) -> Complex64 {
    let r = (z0 - z_ref) / (z0 + z_ref);
    let g = (gamma - r) / (1.0 - r * gamma);
    let g = g * Complex64::from_polar(1.0, -2.0 * theta);
    (g + r) / (1.0 + r * g)
}

/// Exhaustive grid search for the series line minimising |S_ii| at `f0` on
/// `side`, with the other port matched.
///
/// Ties are broken towards the shorter line, then the lower impedance, so the
/// result is deterministic. The zero-length (no-op) line is always a
/// candidate, so matching never makes f0 worse.
pub fn design_series_match(
    net: &TwoPortNetwork,
    f0: f64,
    side: Port,
    z0_range: SearchRange,
    theta_range: SearchRange,
) -> Result<MatchDesign, TransitionError> {
    positive("f0", f0)?;
    z0_range.validate()?;
    theta_range.validate()?;
    if z0_range.start <= 0.0 {
        return Err(TransitionError::InvalidParameter(format!("impedance range must be positive, starts at {}", z0_range.start)));
    }
    if theta_range.start < 0.0 {
        return Err(TransitionError::InvalidParameter(format!("length range must be non-negative, starts at {}", theta_range.start)));
    }
    let s = net.interpolate(f0).ok_or(TransitionError::OutOfSweep(f0))?;
    let k = side.index() + 1;
    let load = s.at(k, k);
    let z_ref = net.z_ref()[side.index()];

    let zs = z0_range.values();
    let mut ts = theta_range.values();
    if !ts.contains(&0.0) {
        ts.insert(0, 0.0);
    }
    let nt = ts.len();
    let candidates = par::map_indices(zs.len() * nt, |i| {
        let (z0, th) = (zs[i / nt], ts[i % nt]);
        (through_line(load, z0, th.to_radians(), z_ref).norm(), th, z0)
    });
    let key = |a: &(f64, f64, f64), b: &(f64, f64, f64)| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
            .then(a.2.partial_cmp(&b.2).unwrap_or(Ordering::Equal))
    };
    let best = candidates
        .into_iter()
        .filter(|c| c.0.is_finite())
        .min_by(key)
        .ok_or_else(|| TransitionError::EmptySearch("no finite candidate".into()))?;
    Ok(MatchDesign {
        matched: SeriesLineMatch { z0: best.2, theta_deg: best.1, f0 },
        reflection: best.0,
        unmatched_reflection: load.norm(),
    })
}
