//! Lumped series and shunt two-ports.

use num_complex::Complex64;

use super::{FrequencyGrid, Mat2, NetError, TwoPortNetwork};
use crate::par;

/// Series impedance `z[i]` between the ports, reference `z_ref` on both.
pub fn series_impedance(grid: &FrequencyGrid, z: &[Complex64], z_ref: f64) -> Result<TwoPortNetwork, NetError> {
    if z.len() != grid.len() {
        return Err(NetError::LengthMismatch { expected: grid.len(), got: z.len() });
    }
    let s = par::map_slice(z, |&z| {
        let den = z + 2.0 * z_ref;
        let r = z / den;
        let t = Complex64::new(2.0 * z_ref, 0.0) / den;
        Mat2::new(r, t, t, r)
    });
    TwoPortNetwork::new(grid.clone(), s, [z_ref, z_ref])
}

/// Shunt admittance `y[i]` across the ports, reference `z_ref` on both.
pub fn shunt_admittance(grid: &FrequencyGrid, y: &[Complex64], z_ref: f64) -> Result<TwoPortNetwork, NetError> {
    if y.len() != grid.len() {
        return Err(NetError::LengthMismatch { expected: grid.len(), got: y.len() });
    }
    let s = par::map_slice(y, |&y| {
        let yn = y * z_ref;
        let den = yn + 2.0;
        let r = -yn / den;
        let t = Complex64::new(2.0, 0.0) / den;
        Mat2::new(r, t, t, r)
    });
    TwoPortNetwork::new(grid.clone(), s, [z_ref, z_ref])
}
