mod common;

use chiptrans::netcore::{gmax, renormalize, Port};
use chiptrans::transitions::{
    apply_series_match, design_series_match, gsg_model, gsg_notch_freq, pitch_notch_estimate, siw_effective_width,
    siw_te10_cutoff, stripline_transition_model, GsgGeometry, GsgParams, SearchRange, SiwGeometry,
    StriplineTransitionParams,
};
use chiptrans::FrequencyGrid;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn gsg_notch_is_load_independent_and_at_sweep_minimum() {
    let mut r = common::rng(2024);
    for _ in 0..100 {
        let p = GsgParams {
            z1: r.gen_range(15.0..120.0),
            tau1: r.gen_range(0.0..2e-12),
            z2: r.gen_range(15.0..120.0),
            tau2: r.gen_range(0.3e-12..3e-12),
        };
        let f0 = gsg_notch_freq(p.tau2).unwrap();
        let grid = FrequencyGrid::linspace(0.2 * f0, 1.8 * f0, 161).unwrap();
        let net = gsg_model(&p, &grid, 50.0).unwrap();
        let zr = [r.gen_range(5.0..200.0), r.gen_range(5.0..200.0)];
        let net = renormalize(&net, zr).unwrap();
        let k = grid.nearest_index(f0);
        assert!((grid.get(k) - f0).abs() < 1e-3 * f0);
        let s21: Vec<f64> = net.s().iter().map(|m| m.at(2, 1).norm()).collect();
        assert!(s21[k] <= 1e-3, "{p:?} {zr:?}: {}", s21[k]);
        let min = (0..s21.len()).min_by(|&a, &b| s21[a].total_cmp(&s21[b])).unwrap();
        assert!((grid.get(min) - f0).abs() <= grid.max_step());
    }
}

#[test]
fn gsg_model_is_lossless() {
    let grid = FrequencyGrid::linspace(10e9, 600e9, 60).unwrap();
    let p = GsgParams { z1: 35.0, tau1: 0.5e-12, z2: 80.0, tau2: 1.1e-12 };
    let net = gsg_model(&p, &grid, 50.0).unwrap();
    for (s, g) in net.s().iter().zip(gmax(&net).gmax_db) {
        assert!((s.spectral_norm() - 1.0).abs() < 1e-12);
        if let Some(g) = g {
            assert!(g.abs() < 1e-6);
        }
    }
}

#[test]
fn pitch_estimate_falls_with_pitch() {
    let f: Vec<f64> = (100..=300)
        .step_by(10)
        .map(|p| pitch_notch_estimate(&GsgGeometry { h: 125e-6, pitch: p as f64 * 1e-6, eps_r: 3.1 }).unwrap())
        .collect();
    assert!(f.windows(2).all(|w| w[1] < w[0]));
}

proptest! {
    #[test]
    fn siw_width_matches_formula(w in 100e-6f64..2e-3, d_frac in 0.05f64..0.9, p in 20e-6f64..200e-6, eps in 1.0f64..12.0) {
        let g = SiwGeometry { w, d: d_frac * p, p, eps_r: eps };
        let exact = w - (d_frac * p).powi(2) / (0.95 * p);
        prop_assume!(exact > 0.0);
        let got = siw_effective_width(&g).unwrap();
        prop_assert!((got - exact).abs() <= 1e-12 * exact);
        let f = siw_te10_cutoff(got, eps).unwrap();
        prop_assert!((f * 2.0 * got * eps.sqrt() / chiptrans::units::C0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matching_never_degrades(c_pad in 0.0f64..60e-15, z_via in 20.0f64..90.0, tau in 0.1e-12f64..3e-12, f0 in 100e9f64..200e9) {
        let grid = FrequencyGrid::linspace(90e9, 210e9, 25).unwrap();
        let p = StriplineTransitionParams { c_pad, z_via, tau_via: tau };
        let dut = stripline_transition_model(&p, &grid, 50.0).unwrap();
        for side in [Port::One, Port::Two] {
            let d = design_series_match(&dut, f0, side, SearchRange::new(10.0, 100.0, 2.0).unwrap(), SearchRange::new(0.0, 90.0, 1.0).unwrap()).unwrap();
            prop_assert!(d.reflection <= d.unmatched_reflection);
            let k = side.index() + 1;
            let matched = apply_series_match(&dut, &d.matched, side).unwrap();
            let at = matched.interpolate(f0).unwrap().at(k, k).norm();
            let before = dut.interpolate(f0).unwrap().at(k, k).norm();
            // Interpolation between grid points is linear in S, so compare on
            // exact points only when f0 is a grid point.
            if grid.points().contains(&f0) {
                prop_assert!(at <= before + 1e-12);
            }
        }
    }
}
