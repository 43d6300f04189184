use super::CalError;
use crate::netcore::{cascade, TwoPortNetwork};
use crate::tline::{matched_section, PropagationConstant};

fn check_lengths(l1: f64, l2: f64) -> Result<(), CalError> {
    for (name, l) in [("l1", l1), ("l2", l2)] {
        if !(l >= 0.0) || !l.is_finite() {
            return Err(CalError::InvalidParameter(format!("{name} must be a non-negative length, got {l}")));
        }
    }
    Ok(())
}

fn shift(net: &TwoPortNetwork, gamma: &PropagationConstant, l1: f64, l2: f64) -> Result<TwoPortNetwork, CalError> {
    let [z1, z2] = net.z_ref();
    let left = matched_section(gamma, z1, l1)?;
    let right = matched_section(gamma, z2, l2)?;
    Ok(cascade(&cascade(&left, net)?, &right)?)
}

/// Moves the reference planes inwards by `l1` at port 1 and `l2` at port 2,
/// removing matched line of propagation constant `gamma`. Transmission gains
/// `e^{γ(l1+l2)}` and each reflection `e^{2γl}`.
pub fn deembed_line(net: &TwoPortNetwork, gamma: &PropagationConstant, l1: f64, l2: f64) -> Result<TwoPortNetwork, CalError> {
    check_lengths(l1, l2)?;
    shift(net, gamma, -l1, -l2)
}

/// Adds matched line at each port; the inverse of [`deembed_line`].
pub fn embed_line(net: &TwoPortNetwork, gamma: &PropagationConstant, l1: f64, l2: f64) -> Result<TwoPortNetwork, CalError> {
    check_lengths(l1, l2)?;
    shift(net, gamma, l1, l2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{FrequencyGrid, Mat2};
    use crate::tline::lossy_line;
    use num_complex::Complex64;

    fn gamma(grid: &FrequencyGrid) -> PropagationConstant {
        PropagationConstant::tem(grid, 3.1, |f| 2.0 + 1e-10 * f).unwrap()
    }

    #[test]
    fn zero_lengths_are_identity() {
        let grid = FrequencyGrid::linspace(10e9, 200e9, 20).unwrap();
        let m = Mat2::new(Complex64::new(0.2, 0.1), Complex64::new(0.7, -0.2), Complex64::new(0.6, 0.3), Complex64::new(-0.1, 0.05));
        let net = TwoPortNetwork::constant(grid.clone(), m, [50.0, 50.0]).unwrap();
        assert!(deembed_line(&net, &gamma(&grid), 0.0, 0.0).unwrap().max_abs_diff(&net) < 1e-15);
    }

    #[test]
    fn removes_a_line_exactly() {
        let grid = FrequencyGrid::linspace(10e9, 200e9, 20).unwrap();
        let g = gamma(&grid);
        let line = lossy_line(&g, 50.0, 4e-3).unwrap();
        let out = deembed_line(&line, &g, 4e-3, 0.0).unwrap();
        let thru = TwoPortNetwork::thru(grid, 50.0).unwrap();
        assert!(out.max_abs_diff(&thru) < 1e-12);
    }

    #[test]
    fn transmission_and_reflection_scaling() {
        let grid = FrequencyGrid::single(100e9).unwrap();
        let g = gamma(&grid);
        let m = Mat2::new(Complex64::new(0.3, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.2));
        let net = TwoPortNetwork::constant(grid, m, [50.0, 50.0]).unwrap();
        let (l1, l2) = (1e-3, 2.5e-3);
        let out = deembed_line(&net, &g, l1, l2).unwrap();
        let gm = g.gamma_at(0);
        assert!((out.s()[0].at(2, 1) - m.at(2, 1) * (gm * (l1 + l2)).exp()).norm() < 1e-12);
        assert!((out.s()[0].at(1, 1) - m.at(1, 1) * (gm * 2.0 * l1).exp()).norm() < 1e-12);
        assert!((out.s()[0].at(2, 2) - m.at(2, 2) * (gm * 2.0 * l2).exp()).norm() < 1e-12);
    }

    #[test]
    fn negative_lengths_rejected() {
        let grid = FrequencyGrid::single(1e9).unwrap();
        let net = TwoPortNetwork::thru(grid.clone(), 50.0).unwrap();
        assert!(deembed_line(&net, &gamma(&grid), -1e-3, 0.0).is_err());
    }
}
