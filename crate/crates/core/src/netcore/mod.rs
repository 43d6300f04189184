//! Complex two-port networks: representation, parameter conversions,
//! interconnections, stability and maximum available gain.
//!
//! Networks are immutable values. Every per-frequency operation is
//! independent, so sweeps are evaluated through [`crate::par`]. Points where
//! a conversion is singular are reported individually (see [`PointFault`])
//! instead of aborting at the first bad sample.

mod convert;
mod elements;
mod gain;
mod interconnect;
mod matrix;

pub use convert::{
    abcd_to_s, abcd_to_s_point, s_to_abcd, s_to_abcd_point, s_to_t_point, s_to_z, s_to_z_point,
    t_to_s_point, z_to_s, z_to_s_point,
};
pub use elements::{series_impedance, shunt_admittance};
pub use gain::{gmax, stability_k, GainProfile, Stability, STABILITY_TOLERANCE};
pub use interconnect::{
    cascade, cascade_inverse, loop_series_element, renormalize, series_connect,
};
pub use matrix::Mat2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used when comparing reference impedances and grids.
pub(crate) const MATCH_RTOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("frequency grid is empty")]
    EmptyGrid,
    #[error("frequency {value} Hz at index {index} is not positive")]
    NonPositiveFrequency { index: usize, value: f64 },
    #[error("frequencies not strictly ascending at index {index}")]
    NotAscending { index: usize },
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("reference impedance of port {port} must be positive, got {value}")]
    NonPositiveImpedance { port: usize, value: f64 },
    #[error("port impedances differ ({0} vs {1} ohm); renormalize first")]
    UnequalPortImpedance(f64, f64),
    #[error("frequency grids differ")]
    GridMismatch,
    #[error("reference impedance mismatch at junction ({0} vs {1} ohm)")]
    ImpedanceMismatch(f64, f64),
    #[error("{op}: singular at {} point(s), first at index {}", points.len(), points.first().copied().unwrap_or(0))]
    Degenerate { op: &'static str, points: Vec<usize> },
}

/// A single frequency point at which an operation is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointFault {
    pub index: usize,
    pub reason: &'static str,
}

impl std::fmt::Display for PointFault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "point {}: {}", self.index, self.reason)
    }
}

/// Collects per-point results, reporting every failing index at once.
pub(crate) fn collect_points<T>(op: &'static str, items: Vec<Result<T, PointFault>>) -> Result<Vec<T>, NetError> {
    let bad: Vec<usize> = items
        .iter()
        .filter_map(|r| r.as_ref().err().map(|f| f.index))
        .collect();
    if !bad.is_empty() {
        return Err(NetError::Degenerate { op, points: bad });
    }
    Ok(items.into_iter().map(|r| r.ok().unwrap()).collect())
}

/// Port selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Port {
    One,
    Two,
}

impl Port {
    pub fn index(self) -> usize {
        match self {
            Port::One => 0,
            Port::Two => 1,
        }
    }
}

/// Strictly ascending, positive frequencies in Hz.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGrid {
    points: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>) -> Result<Self, NetError> {
        if points.is_empty() {
            return Err(NetError::EmptyGrid);
        }
        for (i, &f) in points.iter().enumerate() {
            if !(f > 0.0) || !f.is_finite() {
                return Err(NetError::NonPositiveFrequency { index: i, value: f });
            }
            if i > 0 && f <= points[i - 1] {
                return Err(NetError::NotAscending { index: i });
            }
        }
        Ok(FrequencyGrid { points })
    }

    /// `n` evenly spaced points from `start` to `stop` inclusive.
    pub fn linspace(start: f64, stop: f64, n: usize) -> Result<Self, NetError> {
        match n {
            0 => Err(NetError::EmptyGrid),
            1 => Self::new(vec![start]),
            _ => {
                let step = (stop - start) / (n - 1) as f64;
                Self::new((0..n).map(|i| start + step * i as f64).collect())
            }
        }
    }

    pub fn single(f: f64) -> Result<Self, NetError> {
        Self::new(vec![f])
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.points[i]
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().copied()
    }

    /// Index of the grid point nearest to `f`.
    pub fn nearest_index(&self, f: f64) -> usize {
        let pos = self.points.partition_point(|&x| x < f);
        if pos == 0 {
            0
        } else if pos == self.points.len() {
            pos - 1
        } else if (self.points[pos] - f) < (f - self.points[pos - 1]) {
            pos
        } else {
            pos - 1
        }
    }

    /// Same length and every point equal within a relative 1e-9.
    pub fn matches(&self, other: &FrequencyGrid) -> bool {
        self.len() == other.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (a - b).abs() <= MATCH_RTOL * a.abs().max(b.abs()))
    }

    /// Largest spacing between adjacent points (zero for a single point).
    pub fn max_step(&self) -> f64 {
        self.points.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

impl<'de> Deserialize<'de> for FrequencyGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            points: Vec<f64>,
        }
        let raw = Raw::deserialize(d)?;
        FrequencyGrid::new(raw.points).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn same_impedance(a: f64, b: f64) -> bool {
    (a - b).abs() <= MATCH_RTOL * a.abs().max(b.abs())
}

fn check_z_ref(z_ref: [f64; 2]) -> Result<(), NetError> {
    for (port, &z) in z_ref.iter().enumerate() {
        if !(z > 0.0) || !z.is_finite() {
            return Err(NetError::NonPositiveImpedance { port: port + 1, value: z });
        }
    }
    Ok(())
}

/// Per-frequency S-matrices with a real reference impedance on each port.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPortNetwork {
    grid: FrequencyGrid,
    s: Vec<Mat2>,
    z_ref: [f64; 2],
}

impl TwoPortNetwork {
    pub fn new(grid: FrequencyGrid, s: Vec<Mat2>, z_ref: [f64; 2]) -> Result<Self, NetError> {
        if s.len() != grid.len() {
            return Err(NetError::LengthMismatch { expected: grid.len(), got: s.len() });
        }
        check_z_ref(z_ref)?;
        Ok(TwoPortNetwork { grid, s, z_ref })
    }

    /// Network with the same S-matrix at every point.
    pub fn constant(grid: FrequencyGrid, s: Mat2, z_ref: [f64; 2]) -> Result<Self, NetError> {
        let n = grid.len();
        Self::new(grid, vec![s; n], z_ref)
    }

    /// Reflectionless unit-transmission network.
    pub fn thru(grid: FrequencyGrid, z_ref: f64) -> Result<Self, NetError> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::constant(grid, Mat2::new(zero, one, one, zero), [z_ref, z_ref])
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn s(&self) -> &[Mat2] {
        &self.s
    }

    pub fn z_ref(&self) -> [f64; 2] {
        self.z_ref
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// S-matrix at the grid point nearest to `f`.
    pub fn s_at(&self, f: f64) -> &Mat2 {
        &self.s[self.grid.nearest_index(f)]
    }

    /// One S-parameter across the sweep, `param(2, 1)` is S21.
    pub fn param(&self, row: usize, col: usize) -> Vec<Complex64> {
        self.s.iter().map(|m| m.at(row, col)).collect()
    }

    /// S-matrix at `f`, linearly interpolated in real/imaginary parts.
    /// Returns `None` outside the grid span.
    pub fn interpolate(&self, f: f64) -> Option<Mat2> {
        let pts = self.grid.points();
        if f < pts[0] || f > pts[pts.len() - 1] {
            return None;
        }
        let hi = pts.partition_point(|&x| x < f);
        if pts[hi] == f || hi == 0 {
            return Some(self.s[hi]);
        }
        let lo = hi - 1;
        let t = (f - pts[lo]) / (pts[hi] - pts[lo]);
        let a = self.s[lo].scale(Complex64::new(1.0 - t, 0.0));
        let b = self.s[hi].scale(Complex64::new(t, 0.0));
        Some(a + b)
    }

    /// Replaces the S data, keeping grid and reference impedances.
    pub fn with_s(&self, s: Vec<Mat2>) -> Result<Self, NetError> {
        Self::new(self.grid.clone(), s, self.z_ref)
    }

    /// Same S data relabelled with other reference impedances. No
    /// renormalization takes place; see [`renormalize`] for that.
    pub fn relabel_z_ref(&self, z_ref: [f64; 2]) -> Result<Self, NetError> {
        Self::new(self.grid.clone(), self.s.clone(), z_ref)
    }

    /// Network restricted to the given point indices.
    pub fn subset(&self, indices: &[usize]) -> Result<Self, NetError> {
        let grid = FrequencyGrid::new(indices.iter().map(|&i| self.grid.get(i)).collect())?;
        Self::new(grid, indices.iter().map(|&i| self.s[i]).collect(), self.z_ref)
    }

    /// Largest element-wise |ΔS| against another network on the same grid.
    pub fn max_abs_diff(&self, other: &TwoPortNetwork) -> f64 {
        self.s
            .iter()
            .zip(&other.s)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub(crate) fn require_same_grid(&self, other: &TwoPortNetwork) -> Result<(), NetError> {
        if self.grid.matches(&other.grid) {
            Ok(())
        } else {
            Err(NetError::GridMismatch)
        }
    }

    pub(crate) fn equal_port_impedance(&self) -> Result<f64, NetError> {
        let [a, b] = self.z_ref;
        if same_impedance(a, b) {
            Ok(a)
        } else {
            Err(NetError::UnequalPortImpedance(a, b))
        }
    }
}

/// Per-frequency reflection coefficient of a one-port.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OnePortNetwork {
    grid: FrequencyGrid,
    s11: Vec<Complex64>,
    z_ref: f64,
}

impl OnePortNetwork {
    pub fn new(grid: FrequencyGrid, s11: Vec<Complex64>, z_ref: f64) -> Result<Self, NetError> {
        if s11.len() != grid.len() {
            return Err(NetError::LengthMismatch { expected: grid.len(), got: s11.len() });
        }
        check_z_ref([z_ref, z_ref])?;
        Ok(OnePortNetwork { grid, s11, z_ref })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn s11(&self) -> &[Complex64] {
        &self.s11
    }

    pub fn z_ref(&self) -> f64 {
        self.z_ref
    }

    pub fn len(&self) -> usize {
        self.s11.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s11.is_empty()
    }

    /// Reflection seen at one port of a two-port.
    pub fn from_two_port(net: &TwoPortNetwork, port: Port) -> Self {
        let k = port.index() + 1;
        OnePortNetwork {
            grid: net.grid.clone(),
            s11: net.param(k, k),
            z_ref: net.z_ref[port.index()],
        }
    }
}
