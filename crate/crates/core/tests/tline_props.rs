use std::f64::consts::PI;

use chiptrans::netcore::renormalize;
use chiptrans::tline::{
    apply_roughness, extract_gamma, extract_gamma_with, huray_factor, ideal_line, lossy_line, HurayParams, PhaseAnchor,
    PropagationConstant,
};
use chiptrans::units::MU0;
use chiptrans::FrequencyGrid;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_extraction_inverts_line_synthesis(eps in 1.0f64..9.0, a0 in 0.0f64..50.0, len in 0.5e-3f64..5e-3) {
        let grid = FrequencyGrid::linspace(1e9, 100e9, 200).unwrap();
        let g = PropagationConstant::tem(&grid, eps, |f| a0 * (f / 1e9).sqrt()).unwrap();
        let net = lossy_line(&g, 50.0, len).unwrap();
        let back = extract_gamma(&net, len).unwrap();
        for i in 0..grid.len() {
            prop_assert!((back.gamma_at(i) - g.gamma_at(i)).norm() <= 1e-9 * g.gamma_at(i).norm());
        }
    }

    #[test]
    fn report_rows_round_trip(eps in 1.0f64..9.0, a0 in 0.0f64..50.0) {
        let grid = FrequencyGrid::linspace(1e9, 100e9, 20).unwrap();
        let g = PropagationConstant::tem(&grid, eps, |f| a0 * f / 1e9).unwrap();
        let back = PropagationConstant::from_report_rows(&g.report_rows()).unwrap();
        for i in 0..grid.len() {
            prop_assert!((back.gamma_at(i) - g.gamma_at(i)).norm() <= 1e-12 * g.gamma_at(i).norm());
        }
    }

    #[test]
    fn ideal_line_is_lossless_in_any_reference(z0 in 10.0f64..150.0, tau in 0.1e-12f64..20e-12, zr in 10.0f64..150.0) {
        let grid = FrequencyGrid::linspace(1e9, 300e9, 30).unwrap();
        let net = renormalize(&ideal_line(z0, tau, &grid).unwrap(), [zr, zr]).unwrap();
        for s in net.s() {
            prop_assert!((s.spectral_norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn dc_anchor_recovers_long_line() {
    // More than a full turn at the lowest frequency: only the DC anchor can
    // place the branch.
    let grid = FrequencyGrid::linspace(100e9, 200e9, 201).unwrap();
    let g = PropagationConstant::tem(&grid, 3.1, |_| 1.0).unwrap();
    let len = 5e-3;
    assert!(g.beta()[0] * len > 2.0 * PI);
    let net = lossy_line(&g, 50.0, len).unwrap();
    let back = extract_gamma_with(&net, len, PhaseAnchor::DcIntercept).unwrap();
    assert!((back.beta()[0] - g.beta()[0]).abs() < 1e-9 * g.beta()[0]);
    let naive = extract_gamma(&net, len).unwrap();
    assert!((naive.beta()[0] - g.beta()[0]).abs() > 1.0);
}

#[test]
fn huray_limits_and_monotonicity() {
    let p = HurayParams::copper(0.5e-6, 4.0).unwrap();
    assert!((huray_factor(1e-20, &p) - 1.0).abs() < 1e-6);
    assert!((huray_factor(1e30, &p) - 7.0).abs() < 1e-6);
    let f_eq = 1.0 / (PI * MU0 * p.conductivity * p.nodule_radius.powi(2));
    assert!((huray_factor(f_eq, &p) - 3.4).abs() < 1e-9);
    let k: Vec<f64> = (0..=600).map(|i| huray_factor(1e6 * 10f64.powf(i as f64 / 100.0), &p)).collect();
    assert!(k.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn roughness_only_touches_attenuation() {
    let grid = FrequencyGrid::linspace(10e9, 300e9, 30).unwrap();
    let g = PropagationConstant::tem(&grid, 3.1, |f| 1e-9 * f).unwrap();
    let p = HurayParams::copper(0.25e-6, 4.0).unwrap();
    let rough = apply_roughness(&g, g.alpha(), &p).unwrap();
    assert_eq!(rough.beta(), g.beta());
    assert!(rough.alpha().iter().zip(g.alpha()).all(|(r, s)| r >= s));
}
