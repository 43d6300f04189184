//! Touchstone v1 reader and writer for one- and two-port S-parameters.
//!
//! Two-port data lines list **S11 S21 S12 S22**, which is not matrix row
//! order. Angles in files are degrees. Values are written with 12
//! significant digits so a write/parse round trip is exact to well below
//! 1e-9 in every format.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netcore::{FrequencyGrid, Mat2, NetError, OnePortNetwork, TwoPortNetwork};

/// Magnitudes below this are written as [`DB_FLOOR`] in DB format.
const DB_FLOOR: f64 = -400.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    pub fn multiplier(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            FreqUnit::Hz => "HZ",
            FreqUnit::KHz => "KHZ",
            FreqUnit::MHz => "MHZ",
            FreqUnit::GHz => "GHZ",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DataFormat {
    /// Real, imaginary.
    RI,
    /// Magnitude, angle in degrees.
    MA,
    /// 20·log10 magnitude, angle in degrees.
    DB,
}

impl DataFormat {
    fn keyword(self) -> &'static str {
        match self {
            DataFormat::RI => "RI",
            DataFormat::MA => "MA",
            DataFormat::DB => "DB",
        }
    }
}

impl std::str::FromStr for DataFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "RI" => Ok(DataFormat::RI),
            "MA" => Ok(DataFormat::MA),
            "DB" => Ok(DataFormat::DB),
            _ => Err(format!("unknown data format '{s}', expected ri, ma or db")),
        }
    }
}

/// Contents of the `#` option line. Only S-parameters are supported, so
/// the parameter type is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TouchstoneOptions {
    pub freq_unit: FreqUnit,
    pub format: DataFormat,
    /// Reference resistance, Ω.
    pub resistance: f64,
}

impl Default for TouchstoneOptions {
    /// The v1 defaults: `# GHz S MA R 50`.
    fn default() -> Self {
        TouchstoneOptions { freq_unit: FreqUnit::GHz, format: DataFormat::MA, resistance: 50.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TouchstoneData {
    OnePort(OnePortNetwork),
    TwoPort(TwoPortNetwork),
}

impl TouchstoneData {
    pub fn ports(&self) -> usize {
        match self {
            TouchstoneData::OnePort(_) => 1,
            TouchstoneData::TwoPort(_) => 2,
        }
    }

    pub fn into_two_port(self) -> Option<TwoPortNetwork> {
        match self {
            TouchstoneData::TwoPort(n) => Some(n),
            TouchstoneData::OnePort(_) => None,
        }
    }

    pub fn into_one_port(self) -> Option<OnePortNetwork> {
        match self {
            TouchstoneData::OnePort(n) => Some(n),
            TouchstoneData::TwoPort(_) => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TouchstoneError {
    #[error("no option line ('# ...') before the first data line")]
    MissingOptionLine,
    #[error("line {line}: Touchstone v2 keyword '{keyword}' is not supported (v1 files only)")]
    Version2 { line: usize, keyword: String },
    #[error("line {line}: unsupported parameter type '{found}', only S-parameters are accepted")]
    UnsupportedParameter { line: usize, found: String },
    #[error("line {line}: unrecognised option '{token}'")]
    BadOption { line: usize, token: String },
    #[error("line {line}: reference resistance must be positive, got '{value}'")]
    BadResistance { line: usize, value: String },
    #[error("line {line}: expected 3 (one-port) or 9 (two-port) values, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: {found} values where earlier lines had {expected}")]
    InconsistentColumns { line: usize, expected: usize, found: usize },
    #[error("line {line}: '{token}' is not a finite number")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: frequency {freq} is not above the previous one (non-monotonic; noise data is not supported)")]
    NonMonotonic { line: usize, freq: f64 },
    #[error("line {line}: frequency must be positive, got {freq}")]
    NonPositiveFrequency { line: usize, freq: f64 },
    #[error("file contains no data lines")]
    NoData,
    #[error("network reference impedances {found:?} differ from the option-line resistance {resistance}")]
    ReferenceMismatch { resistance: f64, found: [f64; 2] },
    #[error(transparent)]
    Net(#[from] NetError),
}

fn parse_options(body: &str, line: usize) -> Result<TouchstoneOptions, TouchstoneError> {
    let mut opts = TouchstoneOptions::default();
    let mut tokens = body.split_whitespace();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_uppercase().as_str() {
            "HZ" => opts.freq_unit = FreqUnit::Hz,
            "KHZ" => opts.freq_unit = FreqUnit::KHz,
            "MHZ" => opts.freq_unit = FreqUnit::MHz,
            "GHZ" => opts.freq_unit = FreqUnit::GHz,
            "S" => {}
            "Y" | "Z" | "H" | "G" => {
                return Err(TouchstoneError::UnsupportedParameter { line, found: tok.to_string() })
            }
            "RI" => opts.format = DataFormat::RI,
            "MA" => opts.format = DataFormat::MA,
            "DB" => opts.format = DataFormat::DB,
            "R" => {
                let v = tokens.next().unwrap_or("");
                match v.parse::<f64>() {
                    Ok(r) if r > 0.0 && r.is_finite() => opts.resistance = r,
                    _ => return Err(TouchstoneError::BadResistance { line, value: v.to_string() }),
                }
            }
            _ => return Err(TouchstoneError::BadOption { line, token: tok.to_string() }),
        }
    }
    Ok(opts)
}

fn to_complex(a: f64, b: f64, format: DataFormat) -> Complex64 {
    match format {
        DataFormat::RI => Complex64::new(a, b),
        DataFormat::MA => Complex64::from_polar(a, b.to_radians()),
        DataFormat::DB => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
    }
}

fn from_complex(z: Complex64, format: DataFormat) -> (f64, f64) {
    match format {
        DataFormat::RI => (z.re, z.im),
        DataFormat::MA => (z.norm(), z.arg().to_degrees()),
        DataFormat::DB => {
            let db = if z.norm() > 0.0 { (20.0 * z.norm().log10()).max(DB_FLOOR) } else { DB_FLOOR };
            (db, z.arg().to_degrees())
        }
    }
}

/// Parses a Touchstone v1 file. The port count follows from the number of
/// values per data line (3 or 9). Errors carry 1-based line numbers.
pub fn parse_touchstone(text: &str) -> Result<(TouchstoneData, TouchstoneOptions), TouchstoneError> {
    let mut opts: Option<TouchstoneOptions> = None;
    let mut columns: Option<usize> = None;
    let mut freqs = Vec::new();
    let mut values: Vec<Complex64> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            let keyword = content.split(']').next().unwrap_or(content).to_string() + "]";
            return Err(TouchstoneError::Version2 { line, keyword });
        }
        if let Some(body) = content.strip_prefix('#') {
            // Only the first option line counts.
            if opts.is_none() {
                opts = Some(parse_options(body, line)?);
            }
            continue;
        }
        let o = opts.ok_or(TouchstoneError::MissingOptionLine)?;
        let nums = content
            .split_whitespace()
            .map(|t| match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(TouchstoneError::BadNumber { line, token: t.to_string() }),
            })
            .collect::<Result<Vec<f64>, _>>()?;
        match columns {
            None if nums.len() == 3 || nums.len() == 9 => columns = Some(nums.len()),
            None => return Err(TouchstoneError::ColumnCount { line, found: nums.len() }),
            Some(c) if c != nums.len() => {
                return Err(TouchstoneError::InconsistentColumns { line, expected: c, found: nums.len() })
            }
            Some(_) => {}
        }
        let f = nums[0] * o.freq_unit.multiplier();
        if !(f > 0.0) {
            return Err(TouchstoneError::NonPositiveFrequency { line, freq: f });
        }
        if freqs.last().is_some_and(|&prev| f <= prev) {
            return Err(TouchstoneError::NonMonotonic { line, freq: f });
        }
        freqs.push(f);
        values.extend(nums[1..].chunks(2).map(|p| to_complex(p[0], p[1], o.format)));
    }

    let opts = opts.ok_or(TouchstoneError::MissingOptionLine)?;
    if freqs.is_empty() {
        return Err(TouchstoneError::NoData);
    }
    let grid = FrequencyGrid::new(freqs)?;
    let data = if columns == Some(3) {
        TouchstoneData::OnePort(OnePortNetwork::new(grid, values, opts.resistance)?)
    } else {
        // File order S11 S21 S12 S22.
        let s = values.chunks(4).map(|v| Mat2::new(v[0], v[2], v[1], v[3])).collect();
        TouchstoneData::TwoPort(TwoPortNetwork::new(grid, s, [opts.resistance; 2])?)
    };
    Ok((data, opts))
}

fn push_value(out: &mut String, x: f64) {
    // Normalise -0 so output is stable.
    let x = if x == 0.0 { 0.0 } else { x };
    let _ = write!(out, " {x:.11e}");
}

fn write_lines(
    out: &mut String,
    grid: &FrequencyGrid,
    rows: impl Iterator<Item = Vec<Complex64>>,
    opts: &TouchstoneOptions,
    comments: &[String],
) {
    for c in comments {
        for l in c.lines() {
            let _ = writeln!(out, "! {l}");
        }
    }
    let _ = writeln!(out, "# {} S {} R {}", opts.freq_unit.keyword(), opts.format.keyword(), opts.resistance);
    for (f, row) in grid.iter().zip(rows) {
        out.push_str(&format!("{}", f / opts.freq_unit.multiplier()));
        for z in row {
            let (a, b) = from_complex(z, opts.format);
            push_value(out, a);
            push_value(out, b);
        }
        out.push('\n');
    }
}

fn check_reference(opts: &TouchstoneOptions, z_ref: [f64; 2]) -> Result<(), TouchstoneError> {
    let ok = z_ref.iter().all(|z| (z - opts.resistance).abs() <= 1e-9 * opts.resistance);
    if ok && opts.resistance > 0.0 {
        Ok(())
    } else {
        Err(TouchstoneError::ReferenceMismatch { resistance: opts.resistance, found: z_ref })
    }
}

/// Writes a two-port file. The option-line resistance must equal the
/// network's reference on both ports; renormalize first if it does not.
pub fn write_touchstone(net: &TwoPortNetwork, opts: &TouchstoneOptions) -> Result<String, TouchstoneError> {
    write_touchstone_with_comments(net, opts, &[])
}

/// [`write_touchstone`] with leading `!` comment lines.
pub fn write_touchstone_with_comments(
    net: &TwoPortNetwork,
    opts: &TouchstoneOptions,
    comments: &[String],
) -> Result<String, TouchstoneError> {
    check_reference(opts, net.z_ref())?;
    let mut out = String::new();
    let rows = net.s().iter().map(|m| vec![m.at(1, 1), m.at(2, 1), m.at(1, 2), m.at(2, 2)]);
    write_lines(&mut out, net.grid(), rows, opts, comments);
    Ok(out)
}

/// Writes a one-port file.
pub fn write_touchstone_one_port(
    net: &OnePortNetwork,
    opts: &TouchstoneOptions,
    comments: &[String],
) -> Result<String, TouchstoneError> {
    check_reference(opts, [net.z_ref(); 2])?;
    let mut out = String::new();
    write_lines(&mut out, net.grid(), net.s11().iter().map(|&z| vec![z]), opts, comments);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thru_in_ghz_ri() {
        let (d, o) = parse_touchstone("# GHz S RI R 50\n140 0 0 1 0 1 0 0 0\n").unwrap();
        assert_eq!(o.format, DataFormat::RI);
        let n = d.into_two_port().unwrap();
        assert_eq!(n.grid().points(), &[140e9]);
        assert_eq!(n.z_ref(), [50.0, 50.0]);
        assert_eq!(n.s()[0].at(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(n.s()[0].at(1, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn one_port_db() {
        let (d, _) = parse_touchstone("! comment\n# MHz S DB R 50\n\n100 -3.0103 90 ! inline\n").unwrap();
        let n = d.into_one_port().unwrap();
        assert_eq!(n.grid().points(), &[100e6]);
        let s = n.s11()[0];
        assert!(s.re.abs() < 1e-12);
        assert!((s.im - 10f64.powf(-3.0103 / 20.0)).abs() < 1e-12);
    }

    #[test]
    fn column_order_is_s11_s21_s12_s22() {
        let (d, _) = parse_touchstone("# Hz S RI R 50\n1 1 0 2 0 3 0 4 0\n").unwrap();
        let m = d.into_two_port().unwrap().s()[0];
        assert_eq!(m.at(2, 1).re, 2.0);
        assert_eq!(m.at(1, 2).re, 3.0);
        let text = write_touchstone(
            &TwoPortNetwork::new(FrequencyGrid::single(1.0).unwrap(), vec![m], [50.0; 2]).unwrap(),
            &TouchstoneOptions { freq_unit: FreqUnit::Hz, format: DataFormat::RI, resistance: 50.0 },
        )
        .unwrap();
        let data: Vec<f64> = text.lines().last().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
        assert_eq!(data, vec![1.0, 1.0, 0.0, 2.0, 0.0, 3.0, 0.0, 4.0, 0.0]);
    }

    #[test]
    fn option_defaults_and_case() {
        let (_, o) = parse_touchstone("#\n1 0.5 0\n").unwrap();
        assert_eq!(o, TouchstoneOptions::default());
        let (_, o) = parse_touchstone("# r 75 ri khz\n1 0.5 0\n").unwrap();
        assert_eq!((o.freq_unit, o.format, o.resistance), (FreqUnit::KHz, DataFormat::RI, 75.0));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_touchstone("# GHz S RI R 50\n2 0 0 1 0 1 0 0 0\n1 0 0 1 0 1 0 0 0\n").unwrap_err();
        assert!(matches!(e, TouchstoneError::NonMonotonic { line: 3, .. }));
        assert_eq!(parse_touchstone("1 0 0\n").unwrap_err(), TouchstoneError::MissingOptionLine);
        assert!(matches!(
            parse_touchstone("# GHz Z RI R 50\n").unwrap_err(),
            TouchstoneError::UnsupportedParameter { line: 1, .. }
        ));
        assert!(matches!(
            parse_touchstone("[Version] 2.0\n# GHz S RI R 50\n").unwrap_err(),
            TouchstoneError::Version2 { line: 1, .. }
        ));
        assert!(matches!(
            parse_touchstone("# GHz S RI\n1 0 0 1 0\n").unwrap_err(),
            TouchstoneError::ColumnCount { line: 2, found: 5 }
        ));
        assert!(matches!(
            parse_touchstone("# GHz S RI\n1 0 0\n2 0 0 1 0 1 0 0 0\n").unwrap_err(),
            TouchstoneError::InconsistentColumns { line: 3, .. }
        ));
        assert!(matches!(
            parse_touchstone("# GHz S RI\n1 0 x\n").unwrap_err(),
            TouchstoneError::BadNumber { line: 2, .. }
        ));
        assert!(matches!(parse_touchstone("# GHz S RI R -5\n").unwrap_err(), TouchstoneError::BadResistance { .. }));
        assert_eq!(parse_touchstone("# GHz S RI\n! nothing\n").unwrap_err(), TouchstoneError::NoData);
    }

    #[test]
    fn thru_written_as_unit_magnitude() {
        let grid = FrequencyGrid::single(140e9).unwrap();
        let net = TwoPortNetwork::thru(grid, 50.0).unwrap();
        let text = write_touchstone(&net, &TouchstoneOptions::default()).unwrap();
        let data: Vec<f64> = text.lines().last().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
        assert_eq!(data[0], 140.0);
        assert_eq!((data[3], data[4]), (1.0, 0.0));
    }

    #[test]
    fn db_stores_log_magnitude_with_floor() {
        let grid = FrequencyGrid::new(vec![1e9, 2e9]).unwrap();
        let net = OnePortNetwork::new(grid, vec![Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.0)], 50.0).unwrap();
        let opts = TouchstoneOptions { format: DataFormat::DB, ..Default::default() };
        let text = write_touchstone_one_port(&net, &opts, &[]).unwrap();
        let rows: Vec<Vec<f64>> =
            text.lines().skip(1).map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect()).collect();
        assert!((rows[0][1] + 20.0).abs() < 1e-9);
        assert_eq!(rows[1][1], DB_FLOOR);
    }

    #[test]
    fn reference_mismatch_is_rejected() {
        let net = TwoPortNetwork::thru(FrequencyGrid::single(1e9).unwrap(), 25.0).unwrap();
        assert!(matches!(
            write_touchstone(&net, &TouchstoneOptions::default()),
            Err(TouchstoneError::ReferenceMismatch { .. })
        ));
    }

    #[test]
    fn comments_are_emitted() {
        let net = TwoPortNetwork::thru(FrequencyGrid::single(1e9).unwrap(), 50.0).unwrap();
        let text = write_touchstone_with_comments(&net, &TouchstoneOptions::default(), &["a\nb".into()]).unwrap();
        assert!(text.starts_with("! a\n! b\n# GHZ S MA R 50\n"));
        let (d, _) = parse_touchstone(&text).unwrap();
        assert!(d.into_two_port().unwrap().max_abs_diff(&net) < 1e-15);
    }
}
