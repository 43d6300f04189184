use num_complex::Complex64;

use super::convert::{s_to_t_point, s_to_z_point, t_to_s_point, z_to_s_point};
use super::{collect_points, same_impedance, Mat2, NetError, PointFault, TwoPortNetwork};
use crate::par;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Connects port 2 of `a` to port 1 of `b`.
///
/// Evaluated with the scattering star product, which stays finite where
/// either network has zero transmission. The junction impedances must agree;
/// the outer ports keep their own references.
pub fn cascade(a: &TwoPortNetwork, b: &TwoPortNetwork) -> Result<TwoPortNetwork, NetError> {
    a.require_same_grid(b)?;
    let (za, zb) = (a.z_ref()[1], b.z_ref()[0]);
    if !same_impedance(za, zb) {
        return Err(NetError::ImpedanceMismatch(za, zb));
    }
    let s = par::map_indices(a.len(), |i| star(&a.s()[i], &b.s()[i], i));
    TwoPortNetwork::new(a.grid().clone(), collect_points("cascade", s)?, [a.z_ref()[0], b.z_ref()[1]])
}

fn star(a: &Mat2, b: &Mat2, index: usize) -> Result<Mat2, PointFault> {
    let den = ONE - a.at(2, 2) * b.at(1, 1);
    if den.norm() == 0.0 {
        return Err(PointFault { index, reason: "internal resonance: 1 - S22a*S11b = 0" });
    }
    let k = den.inv();
    let m = Mat2::new(
        a.at(1, 1) + a.at(1, 2) * b.at(1, 1) * a.at(2, 1) * k,
        a.at(1, 2) * b.at(1, 2) * k,
        a.at(2, 1) * b.at(2, 1) * k,
        b.at(2, 2) + b.at(2, 1) * a.at(2, 2) * b.at(1, 2) * k,
    );
    if m.is_finite() {
        Ok(m)
    } else {
        Err(PointFault { index, reason: "non-finite cascade" })
    }
}

/// The network `n` with `cascade(n, net)` equal to a thru.
///
/// Defined wherever both transmissions of `net` are non-zero. The result is
/// generally non-physical; it exists to strip known networks off a
/// measurement.
pub fn cascade_inverse(net: &TwoPortNetwork) -> Result<TwoPortNetwork, NetError> {
    let s = par::map_indices(net.len(), |i| {
        let fault = PointFault { index: i, reason: "zero transmission, not invertible" };
        let t = s_to_t_point(&net.s()[i]).ok_or(fault)?;
        let inv = t.inverse().ok_or(fault)?;
        t_to_s_point(&inv).ok_or(fault)
    });
    let [z1, z2] = net.z_ref();
    TwoPortNetwork::new(net.grid().clone(), collect_points("cascade_inverse", s)?, [z2, z1])
}

/// Series-series interconnection: Z-matrices add point by point.
pub fn series_connect(a: &TwoPortNetwork, b: &TwoPortNetwork) -> Result<TwoPortNetwork, NetError> {
    a.require_same_grid(b)?;
    for k in 0..2 {
        if !same_impedance(a.z_ref()[k], b.z_ref()[k]) {
            return Err(NetError::ImpedanceMismatch(a.z_ref()[k], b.z_ref()[k]));
        }
    }
    let z_ref = a.z_ref();
    let s = par::map_indices(a.len(), |i| {
        let za = s_to_z_point(&a.s()[i], z_ref).ok_or(PointFault { index: i, reason: "Z undefined for first network" })?;
        let zb = s_to_z_point(&b.s()[i], z_ref).ok_or(PointFault { index: i, reason: "Z undefined for second network" })?;
        z_to_s_point(&(za + zb), z_ref).ok_or(PointFault { index: i, reason: "Z + Z0 singular" })
    });
    TwoPortNetwork::new(a.grid().clone(), collect_points("series_connect", s)?, z_ref)
}

/// Re-expresses `net` in new real reference impedances.
///
/// With `Γ_k = (z'_k − z_k)/(z'_k + z_k)` and
/// `κ_k = (z_k + z'_k)/(2√(z_k z'_k))`, the new matrix is
/// `S' = K (S − Γ)(I − Γ S)⁻¹ K⁻¹`.
pub fn renormalize(net: &TwoPortNetwork, z_new: [f64; 2]) -> Result<TwoPortNetwork, NetError> {
    for (k, &z) in z_new.iter().enumerate() {
        if !(z > 0.0) || !z.is_finite() {
            return Err(NetError::NonPositiveImpedance { port: k + 1, value: z });
        }
    }
    let z_old = net.z_ref();
    let gamma = |k: usize| Complex64::new((z_new[k] - z_old[k]) / (z_new[k] + z_old[k]), 0.0);
    let kappa = |k: usize| Complex64::new((z_old[k] + z_new[k]) / (2.0 * (z_old[k] * z_new[k]).sqrt()), 0.0);
    let g = Mat2::diag(gamma(0), gamma(1));
    let kk = Mat2::diag(kappa(0), kappa(1));
    let kk_inv = Mat2::diag(kappa(0).inv(), kappa(1).inv());
    let s = par::map_indices(net.len(), |i| {
        let s = net.s()[i];
        let inv = (Mat2::identity() - g * s)
            .inverse()
            .ok_or(PointFault { index: i, reason: "I - Gamma*S singular" })?;
        Ok(kk * (s - g) * inv * kk_inv)
    });
    TwoPortNetwork::new(net.grid().clone(), collect_points("renormalize", s)?, z_new)
}

/// Series element formed by a two-port whose terminals carry one loop
/// current: the current entering port 1 leaves through port 2
/// (`I1 = −I2`), and the element voltage is `V1 − V2`.
///
/// The element admittance `Y = I1 / (V1 − V2)` is computed from the wave
/// representation so it stays finite where the element impedance has a
/// pole. The result is the two-port of that series element with reference
/// `z_ref` on both ports; at a pole it transmits nothing.
///
/// For an ideal line of impedance `Zc` and electrical length `θ` the
/// element impedance is `2jZc·tan(θ/2)`.
pub fn loop_series_element(net: &TwoPortNetwork, z_ref: f64) -> Result<TwoPortNetwork, NetError> {
    if !(z_ref > 0.0) {
        return Err(NetError::NonPositiveImpedance { port: 1, value: z_ref });
    }
    let [z1, z2] = net.z_ref();
    let (r1, r2) = (z1.sqrt(), z2.sqrt());
    let s = par::map_indices(net.len(), |i| {
        let s = net.s()[i];
        // Port currents are rows of R⁻¹(I − S) acting on incident waves a.
        let cur = Mat2::diag(Complex64::new(1.0 / r1, 0.0), Complex64::new(1.0 / r2, 0.0)) * (Mat2::identity() - s);
        let volt = Mat2::diag(Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)) * (Mat2::identity() + s);
        // Pick a with I1 + I2 = 0.
        let w1 = cur.at(1, 1) + cur.at(2, 1);
        let w2 = cur.at(1, 2) + cur.at(2, 2);
        // If the constraint holds for every excitation (a through
        // connection), any non-trivial a will do.
        let (a1, a2) = if w1.norm() + w2.norm() <= 1e-14 * cur.max_abs() {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (w2, -w1)
        };
        let current = cur.at(1, 1) * a1 + cur.at(1, 2) * a2;
        let voltage = (volt.at(1, 1) - volt.at(2, 1)) * a1 + (volt.at(1, 2) - volt.at(2, 2)) * a2;
        if voltage.norm() == 0.0 && current.norm() == 0.0 {
            return Err(PointFault { index: i, reason: "loop constraint leaves element undetermined" });
        }
        // Series element in reference z_ref: S11 = 1/(1 + 2 z_ref Y).
        let two_z = Complex64::new(2.0 * z_ref, 0.0);
        let den = voltage + two_z * current;
        if den.norm() == 0.0 {
            return Err(PointFault { index: i, reason: "element admittance undefined" });
        }
        let refl = voltage / den;
        let trans = two_z * current / den;
        Ok(Mat2::new(refl, trans, trans, refl))
    });
    TwoPortNetwork::new(net.grid().clone(), collect_points("loop_series_element", s)?, [z_ref, z_ref])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{s_to_abcd, FrequencyGrid};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line(z0: f64, theta: &[f64], z_ref: f64) -> TwoPortNetwork {
        let grid = FrequencyGrid::linspace(1e9, theta.len() as f64 * 1e9, theta.len()).unwrap();
        let s = theta
            .iter()
            .map(|&t| {
                let abcd = Mat2::new(c(t.cos(), 0.0), c(0.0, z0 * t.sin()), c(0.0, t.sin() / z0), c(t.cos(), 0.0));
                crate::netcore::abcd_to_s_point(&abcd, z_ref).unwrap()
            })
            .collect();
        TwoPortNetwork::new(grid, s, [z_ref, z_ref]).unwrap()
    }

    #[test]
    fn cascade_matches_abcd_product() {
        let a = line(30.0, &[0.3, 1.1, 2.0], 50.0);
        let b = line(70.0, &[0.9, 0.2, 2.8], 50.0);
        let ab = cascade(&a, &b).unwrap();
        let (ma, mb) = (s_to_abcd(&a).unwrap(), s_to_abcd(&b).unwrap());
        for i in 0..3 {
            let prod = *ma[i].as_ref().unwrap() * *mb[i].as_ref().unwrap();
            let s = crate::netcore::abcd_to_s_point(&prod, 50.0).unwrap();
            assert!(s.max_abs_diff(&ab.s()[i]) < 1e-13);
        }
    }

    #[test]
    fn cascade_rejects_junction_mismatch() {
        let a = line(30.0, &[0.3], 50.0);
        let b = line(30.0, &[0.3], 75.0);
        assert_eq!(cascade(&a, &b).unwrap_err(), NetError::ImpedanceMismatch(50.0, 75.0));
    }

    #[test]
    fn cascade_inverse_cancels() {
        let a = line(33.0, &[0.4, 1.7], 50.0);
        let inv = cascade_inverse(&a).unwrap();
        let id = cascade(&inv, &a).unwrap();
        let thru = TwoPortNetwork::thru(a.grid().clone(), 50.0).unwrap();
        assert!(id.max_abs_diff(&thru) < 1e-13);
    }

    #[test]
    fn renormalize_same_reference_is_identity() {
        let a = line(33.0, &[0.4, 1.7], 50.0);
        let b = renormalize(&a, [50.0, 50.0]).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn thru_stays_thru_when_both_ports_move() {
        let grid = FrequencyGrid::single(10e9).unwrap();
        let t = TwoPortNetwork::thru(grid, 50.0).unwrap();
        let r = renormalize(&t, [25.0, 25.0]).unwrap();
        assert!(r.s()[0].at(1, 1).norm() < 1e-15);
        assert!((r.s()[0].at(2, 1) - c(1.0, 0.0)).norm() < 1e-15);
        // Moving one port only exposes the step: the 50 ohm port seen from 25 ohm.
        let one = renormalize(&t, [25.0, 50.0]).unwrap();
        assert!((one.s()[0].at(1, 1) - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn line_renormalized_to_its_impedance_is_matched() {
        let a = line(20.0, &[0.7], 50.0);
        let r = renormalize(&a, [20.0, 20.0]).unwrap();
        assert!(r.s()[0].at(1, 1).norm() < 1e-14);
        assert!((r.s()[0].at(2, 1) - Complex64::from_polar(1.0, -0.7)).norm() < 1e-14);
    }

    #[test]
    fn loop_element_of_line_is_tangent_impedance() {
        let zc = 80.0;
        let thetas = [0.2, 1.0, 2.4, PI, 3.0 * PI];
        let net = line(zc, &thetas, 50.0);
        let el = loop_series_element(&net, 50.0).unwrap();
        for (i, &t) in thetas.iter().enumerate() {
            let z = c(0.0, 2.0 * zc * (t / 2.0).tan());
            let expect_s21 = c(100.0, 0.0) / (z + 100.0);
            let got = el.s()[i].at(2, 1);
            assert!((got - expect_s21).norm() < 1e-12, "theta {t}: {got} vs {expect_s21}");
        }
        assert!(el.s()[3].at(2, 1).norm() < 1e-14);
        assert!(el.s()[4].at(2, 1).norm() < 1e-14);
    }
}
