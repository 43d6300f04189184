mod common;

use chiptrans::touchstone::{
    parse_touchstone, write_touchstone, write_touchstone_one_port, DataFormat, FreqUnit, TouchstoneOptions,
};
use chiptrans::{Complex64, FrequencyGrid, OnePortNetwork, TwoPortNetwork};
use proptest::prelude::*;
use rand::Rng;

const FORMATS: [DataFormat; 3] = [DataFormat::RI, DataFormat::MA, DataFormat::DB];

fn random_grid(r: &mut impl Rng, n: usize) -> FrequencyGrid {
    let mut f = r.gen_range(1e6..1e9);
    let pts = (0..n)
        .map(|_| {
            f += r.gen_range(1e5..1e9);
            f
        })
        .collect();
    FrequencyGrid::new(pts).unwrap()
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * a.norm().max(b.norm()) + 1e-300
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_port_round_trip(seed in any::<u64>(), z in 1.0f64..200.0, unit in 0usize..4) {
        let mut r = common::rng(seed);
        let grid = random_grid(&mut r, 64);
        let net = common::random_network(&mut r, &grid, [z, z]);
        let freq_unit = [FreqUnit::Hz, FreqUnit::KHz, FreqUnit::MHz, FreqUnit::GHz][unit];
        for format in FORMATS {
            let opts = TouchstoneOptions { freq_unit, format, resistance: z };
            let text = write_touchstone(&net, &opts).unwrap();
            let (data, o) = parse_touchstone(&text).unwrap();
            prop_assert_eq!(o, opts);
            let back = data.into_two_port().unwrap();
            prop_assert!(back.grid().matches(net.grid()));
            for (a, b) in net.s().iter().zip(back.s()) {
                for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                    prop_assert!(close(a.at(i, j), b.at(i, j)), "{:?} {} {}", format, a.at(i, j), b.at(i, j));
                }
            }
        }
    }

    #[test]
    fn one_port_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let grid = random_grid(&mut r, 32);
        let s11: Vec<Complex64> = (0..32).map(|_| common::polar(&mut r, 1e-6, 1.0)).collect();
        let net = OnePortNetwork::new(grid, s11, 50.0).unwrap();
        for format in FORMATS {
            let opts = TouchstoneOptions { freq_unit: FreqUnit::GHz, format, resistance: 50.0 };
            let text = write_touchstone_one_port(&net, &opts, &[]).unwrap();
            let back = parse_touchstone(&text).unwrap().0.into_one_port().unwrap();
            for (a, b) in net.s11().iter().zip(back.s11()) {
                prop_assert!(close(*a, *b));
            }
        }
    }

    #[test]
    fn comments_and_blank_lines_anywhere(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let grid = random_grid(&mut r, 8);
        let net = common::random_network(&mut r, &grid, [50.0, 50.0]);
        let text = write_touchstone(&net, &TouchstoneOptions::default()).unwrap();
        let mut noisy = String::new();
        for line in text.lines() {
            if r.gen_bool(0.5) {
                noisy.push_str("! interleaved\n\n   \n");
            }
            noisy.push_str(line);
            if r.gen_bool(0.3) {
                noisy.push_str("   ! trailing");
            }
            noisy.push('\n');
        }
        let back = parse_touchstone(&noisy).unwrap().0.into_two_port().unwrap();
        prop_assert!(back.max_abs_diff(&net) < 1e-10);
    }
}

#[test]
fn thousand_point_round_trip_all_formats() {
    let mut r = common::rng(1000);
    let grid = FrequencyGrid::linspace(1e9, 1e12, 1000).unwrap();
    let net: TwoPortNetwork = common::random_network(&mut r, &grid, [50.0, 50.0]);
    for format in FORMATS {
        let opts = TouchstoneOptions { freq_unit: FreqUnit::GHz, format, resistance: 50.0 };
        let back = parse_touchstone(&write_touchstone(&net, &opts).unwrap()).unwrap().0.into_two_port().unwrap();
        let worst = net
            .s()
            .iter()
            .zip(back.s())
            .flat_map(|(a, b)| {
                [(1, 1), (1, 2), (2, 1), (2, 2)].map(|(i, j)| (a.at(i, j) - b.at(i, j)).norm() / a.at(i, j).norm())
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "{format:?}: {worst:e}");
    }
}

#[test]
fn output_is_deterministic() {
    let mut r = common::rng(9);
    let grid = FrequencyGrid::linspace(1e9, 10e9, 10).unwrap();
    let net = common::random_network(&mut r, &grid, [50.0, 50.0]);
    let opts = TouchstoneOptions { format: DataFormat::DB, ..Default::default() };
    assert_eq!(write_touchstone(&net, &opts).unwrap(), write_touchstone(&net, &opts).unwrap());
}
