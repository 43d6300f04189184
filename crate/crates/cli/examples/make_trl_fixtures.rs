//! Regenerates the TRL fixture directories under `crates/cli/fixtures/`.
//!
//! `trl_synthetic`: smooth random error boxes, a lossy line standard, an
//! offset short, and a random DUT embedded between the boxes. The true DUT
//! is stored as `dut_reference.s2p`.
//!
//! `trl_identity`: ideal boxes (the VNA already sits at the DUT planes), so
//! calibration must pass the raw DUT through unchanged.
//!
//! cargo run -p chiptrans-cli --example make_trl_fixtures

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use chiptrans::netcore::cascade;
use chiptrans::tline::lossy_line;
use chiptrans::touchstone::{write_touchstone_with_comments, DataFormat, FreqUnit, TouchstoneOptions};
use chiptrans::{Complex64, FrequencyGrid, Mat2, PropagationConstant, TwoPortNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DELTA_LENGTH: f64 = 0.6e-3;
const EPS_EFF: f64 = 3.1;

fn polar(r: &mut impl Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(r.gen_range(lo..hi), r.gen_range(-PI..PI))
}

fn passive(r: &mut impl Rng, refl: f64, trans: (f64, f64)) -> Mat2 {
    let m = Mat2::new(polar(r, 0.0, refl), polar(r, trans.0, trans.1), polar(r, trans.0, trans.1), polar(r, 0.0, refl));
    let n = m.spectral_norm();
    if n > 0.95 {
        m.scale(Complex64::new(0.95 / n, 0.0))
    } else {
        m
    }
}

/// Constant passive core behind a delay on port `delayed`: D·S·D with D a
/// unitary phase diagonal, so passivity is preserved at every frequency.
fn smooth_box(r: &mut impl Rng, grid: &FrequencyGrid, delayed: usize) -> TwoPortNetwork {
    let core = passive(r, 0.4, (0.5, 0.9));
    let tau = r.gen_range(5e-12..15e-12);
    let s = grid
        .iter()
        .map(|f| {
            let p = Complex64::from_polar(1.0, -2.0 * PI * f * tau);
            let d = if delayed == 1 { [p, Complex64::new(1.0, 0.0)] } else { [Complex64::new(1.0, 0.0), p] };
            Mat2::new(core.at(1, 1) * d[0] * d[0], core.at(1, 2) * d[0] * d[1], core.at(2, 1) * d[1] * d[0], core.at(2, 2) * d[1] * d[1])
        })
        .collect();
    TwoPortNetwork::new(grid.clone(), s, [50.0, 50.0]).unwrap()
}

fn random_dut(r: &mut impl Rng, grid: &FrequencyGrid) -> TwoPortNetwork {
    let s = grid.iter().map(|_| passive(r, 0.6, (0.2, 0.9))).collect();
    TwoPortNetwork::new(grid.clone(), s, [50.0, 50.0]).unwrap()
}

fn terminated(b: &Mat2, load: Complex64, dut_side: usize) -> Complex64 {
    let (o, i) = if dut_side == 2 { (1, 2) } else { (2, 1) };
    b.at(o, o) + b.at(o, i) * b.at(i, o) * load / (1.0 - b.at(i, i) * load)
}

fn write(dir: &Path, name: &str, net: &TwoPortNetwork, comment: &str) {
    let opts = TouchstoneOptions { freq_unit: FreqUnit::GHz, format: DataFormat::RI, resistance: 50.0 };
    let text = write_touchstone_with_comments(net, &opts, &[comment.to_string()]).unwrap();
    fs::write(dir.join(name), text).unwrap();
}

fn fixture(dir: &Path, box1: &TwoPortNetwork, box2: &TwoPortNetwork, gamma: &PropagationConstant, dut: &TwoPortNetwork) {
    fs::create_dir_all(dir).unwrap();
    let grid = gamma.grid();
    let thru = cascade(box1, box2).unwrap();
    let line = cascade(&cascade(box1, &lossy_line(gamma, 50.0, DELTA_LENGTH).unwrap()).unwrap(), box2).unwrap();
    // Offset short: 0.98 magnitude behind 0.3 ps.
    let short: Vec<Complex64> = grid.iter().map(|f| Complex64::from_polar(-0.98, -2.0 * PI * f * 0.3e-12)).collect();
    let zero = Complex64::new(0.0, 0.0);
    let reflect_s = (0..grid.len())
        .map(|i| Mat2::new(terminated(&box1.s()[i], short[i], 2), zero, zero, terminated(&box2.s()[i], short[i], 1)))
        .collect();
    let reflect = TwoPortNetwork::new(grid.clone(), reflect_s, [50.0, 50.0]).unwrap();
    let raw = cascade(&cascade(box1, dut).unwrap(), box2).unwrap();
    write(dir, "thru.s2p", &thru, "thru standard");
    write(dir, "line.s2p", &line, "line standard, 0.6 mm longer than thru");
    write(dir, "reflect.s2p", &reflect, "reflect standard on both ports (S11, S22); S21 = S12 = 0");
    write(dir, "dut_raw.s2p", &raw, "DUT measured through the error boxes");
    write(dir, "dut_reference.s2p", dut, "DUT at the calibrated reference planes");
    let manifest = serde_json::json!({
        "thru": "thru.s2p",
        "line": "line.s2p",
        "reflect": "reflect.s2p",
        "delta_length_m": DELTA_LENGTH,
        "reflect_kind": "short",
        "options": { "line_z0": 50.0 }
    });
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest).unwrap() + "\n").unwrap();
}

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let grid = FrequencyGrid::linspace(20e9, 110e9, 46).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(0x7e1);
    let gamma = PropagationConstant::tem(&grid, EPS_EFF, |f| 2.0 + 1e-10 * f).unwrap();

    let box1 = smooth_box(&mut r, &grid, 1);
    let box2 = smooth_box(&mut r, &grid, 2);
    let dut = random_dut(&mut r, &grid);
    fixture(&root.join("trl_synthetic"), &box1, &box2, &gamma, &dut);

    let ideal = TwoPortNetwork::thru(grid.clone(), 50.0).unwrap();
    let dut = random_dut(&mut r, &grid);
    fixture(&root.join("trl_identity"), &ideal, &ideal, &gamma, &dut);
}
