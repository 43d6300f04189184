use std::fs;
use std::path::Path;

use chiptrans::touchstone::{parse_touchstone, TouchstoneData, TouchstoneOptions};
use chiptrans::{FrequencyGrid, TwoPortNetwork};

use crate::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

pub fn read_touchstone(path: &Path) -> Result<(TouchstoneData, TouchstoneOptions), CliError> {
    let text = read_text(path)?;
    parse_touchstone(&text).map_err(|e| CliError::from(e).context(path.display()))
}

pub fn read_two_port(path: &Path) -> Result<(TwoPortNetwork, TouchstoneOptions), CliError> {
    let (data, opts) = read_touchstone(path)?;
    match data.into_two_port() {
        Some(net) => Ok((net, opts)),
        None => Err(CliError::input(format!("{}: expected a two-port file, found a one-port file", path.display()))),
    }
}

fn number(field: &str, what: &str, spec: &str) -> Result<f64, CliError> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("{what} '{spec}': '{field}' is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::input(format!("{what} '{spec}': '{field}' is not finite")))
    }
}

fn three(spec: &str, what: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::input(format!("{what} '{spec}': expected start:stop:{}", if what == "grid" { "npoints" } else { "step" })));
    }
    Ok([number(parts[0], what, spec)?, number(parts[1], what, spec)?, number(parts[2], what, spec)?])
}

/// `start:stop:step`, all in the caller's unit.
pub fn parse_stepped(spec: &str) -> Result<(f64, f64, f64), CliError> {
    let [a, b, c] = three(spec, "range")?;
    Ok((a, b, c))
}

/// `start:stop:npoints` in GHz, returned in Hz.
pub fn parse_grid_ghz(spec: &str) -> Result<FrequencyGrid, CliError> {
    let [a, b, n] = three(spec, "grid")?;
    if n < 1.0 || n.fract() != 0.0 {
        return Err(CliError::input(format!("grid '{spec}': npoints must be a positive integer")));
    }
    let n = n as usize;
    let grid = if n == 1 { FrequencyGrid::single(a * 1e9) } else { FrequencyGrid::linspace(a * 1e9, b * 1e9, n) };
    grid.map_err(|e| CliError::input(format!("grid '{spec}': {e}")))
}
