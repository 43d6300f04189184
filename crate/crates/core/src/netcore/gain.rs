//! Rollett stability factor and maximum available gain.

use serde::Serialize;

use super::{FrequencyGrid, PointFault, TwoPortNetwork};
use crate::par;
use crate::units::db10;

/// Smallest distance from unity within which K is treated as exactly 1.
///
/// For a lossless network K = 1 analytically, but rounding perturbs K and
/// `K − √(K² − 1)` turns a perturbation ε into a gain error of about √(2ε).
/// The band actually used at each point is the larger of this and the
/// rounding error bound of the K expression itself (see
/// [`Stability::k_tolerance`]), which grows as |S12·S21| shrinks.
pub const STABILITY_TOLERANCE: f64 = 1e-12;

/// Multiple of machine epsilon allowed for rounding in the K expression.
const K_ROUNDING_ULPS: f64 = 64.0;

/// Rollett factor `K` and determinant magnitude `|Δ|` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stability {
    pub k: f64,
    pub delta_mag: f64,
    /// K values within this of 1 are indistinguishable from 1.
    pub k_tolerance: f64,
}

impl Stability {
    /// Unconditionally stable: K ≥ 1 and |Δ| ≤ 1.
    pub fn is_stable(&self) -> bool {
        self.k >= 1.0 - self.k_tolerance && self.delta_mag <= 1.0 + STABILITY_TOLERANCE
    }
}

/// Rollett factor per point. Unilateral points (S12·S21 = 0) are reported.
pub fn stability_k(net: &TwoPortNetwork) -> Vec<Result<Stability, PointFault>> {
    par::map_slice(net.s(), |s| {
        let (s11, s12, s21, s22) = (s.at(1, 1), s.at(1, 2), s.at(2, 1), s.at(2, 2));
        let delta = s11 * s22 - s12 * s21;
        let p = (s12 * s21).norm();
        if p == 0.0 {
            return Err(PointFault { index: 0, reason: "unilateral (S12*S21 = 0)" });
        }
        let k = (1.0 - s11.norm_sqr() - s22.norm_sqr() + delta.norm_sqr()) / (2.0 * p);
        let scale = (1.0 + s11.norm_sqr() + s22.norm_sqr() + delta.norm_sqr()) / (2.0 * p);
        let k_tolerance = (K_ROUNDING_ULPS * f64::EPSILON * scale).max(STABILITY_TOLERANCE);
        Ok(Stability { k, delta_mag: delta.norm(), k_tolerance })
    })
    .into_iter()
    .enumerate()
    .map(|(i, r)| r.map_err(|f| PointFault { index: i, ..f }))
    .collect()
}

/// Per-point G_max. `gmax_db[i]` is `None` where the network is unilateral.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainProfile {
    pub grid: FrequencyGrid,
    pub gmax_db: Vec<Option<f64>>,
    pub stable: Vec<bool>,
}

impl GainProfile {
    pub fn unilateral_points(&self) -> Vec<usize> {
        self.gmax_db
            .iter()
            .enumerate()
            .filter_map(|(i, g)| g.is_none().then_some(i))
            .collect()
    }
}

/// Maximum available gain where K ≥ 1, maximum stable gain `|S21/S12|`
/// (flagged unstable) otherwise.
pub fn gmax(net: &TwoPortNetwork) -> GainProfile {
    let stab = stability_k(net);
    let gains: Vec<(Option<f64>, bool)> = par::map_indices(net.len(), |i| match &stab[i] {
        Err(_) => (None, false),
        Ok(st) => {
            let s = &net.s()[i];
            let ratio = s.at(2, 1).norm() / s.at(1, 2).norm();
            let stable = st.is_stable();
            let g = if st.k >= 1.0 - st.k_tolerance {
                let k = if st.k - 1.0 <= st.k_tolerance { 1.0 } else { st.k };
                ratio * (k - (k * k - 1.0).sqrt())
            } else {
                ratio
            };
            (Some(db10(g)), stable)
        }
    });
    let (gmax_db, stable) = gains.into_iter().unzip();
    GainProfile { grid: net.grid().clone(), gmax_db, stable }
}
