use chiptrans::linkbudget::{capacity, capacity_sweep, sensitivity, snr, LinkBudgetConfig};
use chiptrans::units::{db10, undb10};
use proptest::prelude::*;

fn slope_at(cfg: &LinkBudgetConfig, il_db: f64) -> f64 {
    let h = 1e-4;
    let c = |x: f64| capacity(cfg, undb10(x)).unwrap().0;
    (c(il_db + h) - c(il_db)) / h
}

#[test]
fn slope_converges_at_high_snr() {
    let base = LinkBudgetConfig::base_station_140ghz();
    // Raise power until SNR/N_beams exceeds 1e4.
    let cfg = LinkBudgetConfig { p_tx: base.p_tx * 1e3, ..base };
    assert!(snr(&cfg, 1.0).unwrap() / cfg.n_beams as f64 > 1e4);
    let s = slope_at(&cfg, 0.0);
    assert!((s / sensitivity(&cfg) - 1.0).abs() < 0.005, "{s} vs {}", sensitivity(&cfg));
}

#[test]
fn sweep_monotone_over_six_db() {
    let pts = capacity_sweep(&LinkBudgetConfig::base_station_140ghz(), 0.0, 6.0, 0.1).unwrap();
    assert_eq!(pts.len(), 61);
    assert!(pts.windows(2).all(|w| w[1].c_exact <= w[0].c_exact));
    assert!(pts.iter().all(|p| p.c_exact >= 0.0 && p.c_approx >= 0.0));
}

proptest! {
    #[test]
    fn one_db_of_loss_costs_two_db_of_snr(il_db in 0.0f64..20.0, extra in 0.0f64..10.0) {
        let cfg = LinkBudgetConfig::base_station_140ghz();
        let a = snr(&cfg, undb10(il_db)).unwrap();
        let b = snr(&cfg, undb10(il_db + extra)).unwrap();
        prop_assert!((db10(a) - db10(b) - 2.0 * extra).abs() < 1e-9);
    }
}
