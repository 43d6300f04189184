#![allow(dead_code)]

use chiptrans::{Complex64, FrequencyGrid, Mat2, TwoPortNetwork};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn polar(r: &mut impl Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(r.gen_range(lo..hi), r.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Random strictly passive S-matrix with transmission magnitudes in `trans`.
pub fn passive(r: &mut impl Rng, refl: f64, trans: (f64, f64)) -> Mat2 {
    let m = Mat2::new(polar(r, 0.0, refl), polar(r, trans.0, trans.1), polar(r, trans.0, trans.1), polar(r, 0.0, refl));
    let n = m.spectral_norm();
    if n > 0.98 {
        m.scale(Complex64::new(0.98 / n, 0.0))
    } else {
        m
    }
}

pub fn random_network(r: &mut impl Rng, grid: &FrequencyGrid, z_ref: [f64; 2]) -> TwoPortNetwork {
    let s = (0..grid.len()).map(|_| passive(r, 0.6, (0.2, 0.9))).collect();
    TwoPortNetwork::new(grid.clone(), s, z_ref).unwrap()
}
