use std::path::Path;

use chiptrans::linkbudget::{capacity_sweep, sensitivity, LinkBudgetConfig, DEFAULT_TEMPERATURE};
use chiptrans::units::{db10, dbm_to_watts, undb10};
use serde_json::{Map, Value};

use crate::io::{parse_stepped, read_text};
use crate::table::{Table, TableFormat};
use crate::CliError;

const REAL_KEYS: [&str; 7] = ["p_tx_dbm", "g_t_dbi", "g_r_dbi", "bandwidth_hz", "f0_hz", "distance_m", "noise_figure_db"];
const COUNT_KEYS: [&str; 3] = ["n_ant", "n_beams", "n_pol"];
const OPTIONAL_KEYS: [&str; 1] = ["temperature_k"];

fn real(obj: &Map<String, Value>, key: &str) -> Result<f64, CliError> {
    obj[key].as_f64().ok_or_else(|| CliError::input(format!("'{key}' must be a number, got {}", obj[key])))
}

fn count(obj: &Map<String, Value>, key: &str) -> Result<u32, CliError> {
    obj[key]
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| CliError::input(format!("'{key}' must be a non-negative integer, got {}", obj[key])))
}

/// Link configuration in engineering units (dBm, dBi, dB, Hz, m, K):
/// every key of `REAL_KEYS` and `COUNT_KEYS` is required, `temperature_k`
/// defaults to 290 K. All missing keys are reported at once.
pub fn parse_link_config(text: &str) -> Result<LinkBudgetConfig, CliError> {
    let v: Value = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| CliError::input("link config must be a JSON object"))?;
    let missing: Vec<&str> = REAL_KEYS.iter().chain(&COUNT_KEYS).filter(|k| !obj.contains_key(**k)).copied().collect();
    if !missing.is_empty() {
        return Err(CliError::input(format!("link config is missing keys: {}", missing.join(", "))));
    }
    let unknown: Vec<&str> = obj
        .keys()
        .map(String::as_str)
        .filter(|k| !REAL_KEYS.contains(k) && !COUNT_KEYS.contains(k) && !OPTIONAL_KEYS.contains(k))
        .collect();
    if !unknown.is_empty() {
        return Err(CliError::input(format!("link config has unknown keys: {}", unknown.join(", "))));
    }
    let temperature = if obj.contains_key("temperature_k") { real(obj, "temperature_k")? } else { DEFAULT_TEMPERATURE };
    let cfg = LinkBudgetConfig {
        p_tx: dbm_to_watts(real(obj, "p_tx_dbm")?),
        g_t: undb10(real(obj, "g_t_dbi")?),
        g_r: undb10(real(obj, "g_r_dbi")?),
        n_ant: count(obj, "n_ant")?,
        n_beams: count(obj, "n_beams")?,
        n_pol: count(obj, "n_pol")?,
        b: real(obj, "bandwidth_hz")?,
        f0: real(obj, "f0_hz")?,
        d: real(obj, "distance_m")?,
        noise_factor: undb10(real(obj, "noise_figure_db")?),
        temperature,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_link_config(path: &Path) -> Result<LinkBudgetConfig, CliError> {
    parse_link_config(&read_text(path)?).map_err(|e| e.context(path.display()))
}

/// `il_db, snr_db, c_exact_bps, c_approx_bps` over `start:stop:step` dB of
/// one-way transition loss.
pub fn capacity_table(cfg: &LinkBudgetConfig, sweep: &str) -> Result<Table, CliError> {
    let (a, b, step) = parse_stepped(sweep)?;
    let mut t = Table::new(&["il_db", "snr_db", "c_exact_bps", "c_approx_bps"]);
    for p in capacity_sweep(cfg, a, b, step)? {
        t.push(vec![p.il_db.into(), db10(p.snr_linear).into(), p.c_exact.into(), p.c_approx.into()]);
    }
    Ok(t)
}

/// High-SNR capacity slope against transition loss.
pub fn sensitivity_table(cfg: &LinkBudgetConfig) -> Table {
    let mut t = Table::new(&["sensitivity_bps_per_db", "sensitivity_gbps_per_db"]);
    let s = sensitivity(cfg);
    t.push(vec![s.into(), (s / 1e9).into()]);
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkReport<'a> {
    Sweep(&'a str),
    Sensitivity,
}

pub fn cmd_linkbudget(config: &Path, report: LinkReport<'_>, format: TableFormat) -> Result<String, CliError> {
    let cfg = load_link_config(config)?;
    match report {
        LinkReport::Sweep(s) => capacity_table(&cfg, s)?.render(format),
        LinkReport::Sensitivity => sensitivity_table(&cfg).render(format),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = r#"{"p_tx_dbm": 4, "g_t_dbi": 5, "g_r_dbi": 5, "n_ant": 16, "n_beams": 8, "n_pol": 2,
        "bandwidth_hz": 20e9, "f0_hz": 140e9, "distance_m": 5, "noise_figure_db": 10}"#;

    #[test]
    fn engineering_units_map_to_reference_config() {
        let cfg = parse_link_config(REFERENCE).unwrap();
        let r = LinkBudgetConfig::base_station_140ghz();
        assert!((cfg.p_tx / r.p_tx - 1.0).abs() < 1e-12);
        assert!((cfg.noise_factor / r.noise_factor - 1.0).abs() < 1e-12);
        assert_eq!(cfg.temperature, 290.0);
        assert_eq!((cfg.n_ant, cfg.n_beams, cfg.n_pol), (16, 8, 2));
    }

    #[test]
    fn missing_keys_listed_together() {
        let err = parse_link_config(r#"{"p_tx_dbm": 4, "n_ant": 16}"#).unwrap_err().to_string();
        for k in ["g_t_dbi", "bandwidth_hz", "n_beams", "n_pol", "noise_figure_db"] {
            assert!(err.contains(k), "{err}");
        }
        assert!(!err.contains("p_tx_dbm"));
    }

    #[test]
    fn bad_values_rejected() {
        let neg = REFERENCE.replace("\"n_pol\": 2", "\"n_pol\": -2");
        assert!(parse_link_config(&neg).is_err());
        let extra = REFERENCE.replace("{", "{\"gain\": 1,");
        assert!(parse_link_config(&extra).unwrap_err().to_string().contains("gain"));
        assert!(parse_link_config("[1]").is_err());
    }
}
