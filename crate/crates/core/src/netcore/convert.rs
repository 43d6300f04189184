//! S ↔ ABCD, S ↔ Z and S ↔ T (wave-cascade) conversions.
//!
//! T-parameters follow the `[b1; a1] = T [a2; b2]` convention, so a chain
//! of networks corresponds to the plain matrix product of their T-matrices.

use num_complex::Complex64;

use super::{collect_points, FrequencyGrid, Mat2, NetError, PointFault, TwoPortNetwork};
use crate::par;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const TWO: Complex64 = Complex64::new(2.0, 0.0);

fn finite_or(m: Mat2, index: usize, reason: &'static str) -> Result<Mat2, PointFault> {
    if m.is_finite() {
        Ok(m)
    } else {
        Err(PointFault { index, reason })
    }
}

/// ABCD matrix of one S-matrix in a common reference `z0`.
pub fn s_to_abcd_point(s: &Mat2, z0: f64) -> Option<Mat2> {
    let (s11, s12, s21, s22) = (s.at(1, 1), s.at(1, 2), s.at(2, 1), s.at(2, 2));
    if s21.norm() == 0.0 {
        return None;
    }
    let den = TWO * s21;
    let p = s12 * s21;
    let a = ((ONE + s11) * (ONE - s22) + p) / den;
    let b = ((ONE + s11) * (ONE + s22) - p) / den * z0;
    let c = ((ONE - s11) * (ONE - s22) - p) / den / z0;
    let d = ((ONE - s11) * (ONE + s22) + p) / den;
    let m = Mat2::new(a, b, c, d);
    m.is_finite().then_some(m)
}

/// S-matrix of one ABCD matrix in a common reference `z0`.
pub fn abcd_to_s_point(abcd: &Mat2, z0: f64) -> Option<Mat2> {
    let (a, b, c, d) = (abcd.at(1, 1), abcd.at(1, 2), abcd.at(2, 1), abcd.at(2, 2));
    let bn = b / z0;
    let cn = c * z0;
    let den = a + bn + cn + d;
    if den.norm() == 0.0 {
        return None;
    }
    let m = Mat2::new(
        (a + bn - cn - d) / den,
        TWO * (a * d - b * c) / den,
        TWO / den,
        (-a + bn - cn + d) / den,
    );
    m.is_finite().then_some(m)
}

/// Z-matrix of one S-matrix with per-port real references.
pub fn s_to_z_point(s: &Mat2, z_ref: [f64; 2]) -> Option<Mat2> {
    let inv = (Mat2::identity() - *s).inverse()?;
    let r = Mat2::diag(Complex64::new(z_ref[0].sqrt(), 0.0), Complex64::new(z_ref[1].sqrt(), 0.0));
    let z = r * (Mat2::identity() + *s) * inv * r;
    z.is_finite().then_some(z)
}

/// S-matrix of one Z-matrix with per-port real references.
pub fn z_to_s_point(z: &Mat2, z_ref: [f64; 2]) -> Option<Mat2> {
    let rinv = Mat2::diag(
        Complex64::new(1.0 / z_ref[0].sqrt(), 0.0),
        Complex64::new(1.0 / z_ref[1].sqrt(), 0.0),
    );
    let zn = rinv * *z * rinv;
    let inv = (zn + Mat2::identity()).inverse()?;
    let s = (zn - Mat2::identity()) * inv;
    s.is_finite().then_some(s)
}

/// Wave-cascade matrix; undefined when S21 = 0.
pub fn s_to_t_point(s: &Mat2) -> Option<Mat2> {
    let s21 = s.at(2, 1);
    if s21.norm() == 0.0 {
        return None;
    }
    let t = Mat2::new(-s.det(), s.at(1, 1), -s.at(2, 2), ONE).scale(s21.inv());
    t.is_finite().then_some(t)
}

/// Inverse of [`s_to_t_point`]; undefined when T22 = 0.
pub fn t_to_s_point(t: &Mat2) -> Option<Mat2> {
    let t22 = t.at(2, 2);
    if t22.norm() == 0.0 {
        return None;
    }
    let s = Mat2::new(t.at(1, 2), t.det(), ONE, -t.at(2, 1)).scale(t22.inv());
    s.is_finite().then_some(s)
}

/// Per-point ABCD matrices. Both ports must share one reference impedance;
/// points with S21 = 0 are reported individually.
pub fn s_to_abcd(net: &TwoPortNetwork) -> Result<Vec<Result<Mat2, PointFault>>, NetError> {
    let z0 = net.equal_port_impedance()?;
    Ok(par::map_indices(net.len(), |i| {
        s_to_abcd_point(&net.s()[i], z0).ok_or(PointFault { index: i, reason: "S21 = 0, ABCD undefined" })
    }))
}

/// Network from per-point ABCD matrices in reference `z_ref`.
pub fn abcd_to_s(grid: &FrequencyGrid, abcd: &[Mat2], z_ref: f64) -> Result<TwoPortNetwork, NetError> {
    if abcd.len() != grid.len() {
        return Err(NetError::LengthMismatch { expected: grid.len(), got: abcd.len() });
    }
    if !(z_ref > 0.0) {
        return Err(NetError::NonPositiveImpedance { port: 1, value: z_ref });
    }
    let s = par::map_indices(abcd.len(), |i| {
        abcd_to_s_point(&abcd[i], z_ref)
            .ok_or(PointFault { index: i, reason: "A*Z0 + B + C*Z0^2 + D*Z0 = 0" })
            .and_then(|m| finite_or(m, i, "non-finite S"))
    });
    TwoPortNetwork::new(grid.clone(), collect_points("abcd_to_s", s)?, [z_ref, z_ref])
}

/// Per-point Z matrices; points where (I − S) is singular are reported.
pub fn s_to_z(net: &TwoPortNetwork) -> Vec<Result<Mat2, PointFault>> {
    let z_ref = net.z_ref();
    par::map_indices(net.len(), |i| {
        s_to_z_point(&net.s()[i], z_ref).ok_or(PointFault { index: i, reason: "I - S singular, Z undefined" })
    })
}

/// Network from per-point Z matrices.
pub fn z_to_s(grid: &FrequencyGrid, z: &[Mat2], z_ref: [f64; 2]) -> Result<TwoPortNetwork, NetError> {
    if z.len() != grid.len() {
        return Err(NetError::LengthMismatch { expected: grid.len(), got: z.len() });
    }
    let s = par::map_indices(z.len(), |i| {
        z_to_s_point(&z[i], z_ref).ok_or(PointFault { index: i, reason: "Z + Z0 singular" })
    });
    TwoPortNetwork::new(grid.clone(), collect_points("z_to_s", s)?, z_ref)
}
