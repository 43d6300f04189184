use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use chiptrans::calibration::{
    apply_cal, deembed_line, ripple_amplitude, ripple_spacing_diagnostic, trl_calibrate, CalError, ErrorBoxes, ReflectKind,
    TrlOptions, TrlPointStatus, TrlStandards,
};
use chiptrans::touchstone::{write_touchstone_with_comments, TouchstoneData, TouchstoneOptions};
use chiptrans::units::C0;
use chiptrans::{OnePortNetwork, Port, PropagationConstant, TwoPortNetwork};
use serde::Deserialize;

use crate::io::{read_text, read_touchstone, read_two_port};
use crate::table::{format_number, Cell, Table, TableFormat};
use crate::CliError;

/// TRL run description. Paths are relative to the manifest's directory.
///
/// The reflect standard is given either as one two-port file (`reflect`,
/// S11 and S22 used) or as two one-port files.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrlManifest {
    pub thru: PathBuf,
    pub line: PathBuf,
    #[serde(default)]
    pub reflect: Option<PathBuf>,
    #[serde(default)]
    pub reflect_port1: Option<PathBuf>,
    #[serde(default)]
    pub reflect_port2: Option<PathBuf>,
    /// Line length minus thru length, m.
    pub delta_length_m: f64,
    pub reflect_kind: ReflectKind,
    #[serde(default)]
    pub options: TrlOptions,
}

fn manifest_error(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::input(format!("manifest {}: {msg}", path.display()))
}

fn resolve(manifest: &Path, role: &str, rel: &Path) -> Result<PathBuf, CliError> {
    let base = manifest.parent().unwrap_or_else(|| Path::new(""));
    let p = base.join(rel);
    if p.is_file() {
        Ok(p)
    } else {
        Err(manifest_error(manifest, format!("{role} file '{}' does not exist", p.display())))
    }
}

fn one_port(path: &Path) -> Result<OnePortNetwork, CliError> {
    match read_touchstone(path)?.0 {
        TouchstoneData::OnePort(n) => Ok(n),
        TouchstoneData::TwoPort(_) => Err(CliError::input(format!("{}: expected a one-port reflect file", path.display()))),
    }
}

pub fn load_standards(manifest: &Path) -> Result<(TrlStandards, TrlOptions), CliError> {
    let m: TrlManifest = serde_json::from_str(&read_text(manifest)?).map_err(|e| manifest_error(manifest, e))?;
    let thru = resolve(manifest, "thru", &m.thru)?;
    let line = resolve(manifest, "line", &m.line)?;
    let (r1, r2) = match (&m.reflect, &m.reflect_port1, &m.reflect_port2) {
        (Some(r), None, None) => {
            let p = resolve(manifest, "reflect", r)?;
            match read_touchstone(&p)?.0 {
                TouchstoneData::TwoPort(n) => (OnePortNetwork::from_two_port(&n, Port::One), OnePortNetwork::from_two_port(&n, Port::Two)),
                TouchstoneData::OnePort(_) => {
                    return Err(manifest_error(manifest, "'reflect' must be a two-port file; use reflect_port1/reflect_port2 for one-port files"))
                }
            }
        }
        (None, Some(a), Some(b)) => {
            let (a, b) = (resolve(manifest, "reflect_port1", a)?, resolve(manifest, "reflect_port2", b)?);
            (one_port(&a)?, one_port(&b)?)
        }
        (None, None, None) => return Err(manifest_error(manifest, "no reflect standard: give 'reflect' or 'reflect_port1' and 'reflect_port2'")),
        _ => return Err(manifest_error(manifest, "give either 'reflect' or both 'reflect_port1' and 'reflect_port2'")),
    };
    let std = TrlStandards {
        thru: read_two_port(&thru)?.0,
        line: read_two_port(&line)?.0,
        reflect_port1: r1,
        reflect_port2: r2,
        delta_length: m.delta_length_m,
        reflect_kind: m.reflect_kind,
    };
    Ok((std, m.options))
}

fn status_name(s: TrlPointStatus) -> &'static str {
    match s {
        TrlPointStatus::Ok => "ok",
        TrlPointStatus::OutsideBand => "outside_band",
        TrlPointStatus::Degenerate => "degenerate",
        TrlPointStatus::Singular => "singular",
        TrlPointStatus::Interpolated => "interpolated",
    }
}

/// `freq_hz, alpha_db_per_mm, beta_deg_per_mm, status`.
pub fn gamma_table(boxes: &ErrorBoxes) -> Table {
    let mut t = Table::new(&["freq_hz", "alpha_db_per_mm", "beta_deg_per_mm", "status"]);
    for ((f, a, b), s) in boxes.gamma_est.report_rows().into_iter().zip(&boxes.status) {
        t.push(vec![f.into(), a.into(), b.into(), status_name(*s).into()]);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrlOutput {
    pub calibrated: String,
    pub gamma_csv: String,
    pub notes: Vec<String>,
}

/// Solves TRL from the manifest's standards and corrects the raw DUT.
/// The calibrated file keeps the DUT file's unit and format; its reference
/// is the line impedance (see the file's leading comment).
pub fn cmd_trl(manifest: &Path, dut: &Path) -> Result<TrlOutput, CliError> {
    let (std, opts) = load_standards(manifest)?;
    let (raw, raw_opts) = read_two_port(dut)?;
    let boxes = trl_calibrate(&std, &opts)?;
    let cal = apply_cal(&boxes, &raw)?;
    let mut comments = vec![boxes.reference.caveat()];
    let flagged = boxes.flagged_points();
    let mut notes = Vec::new();
    if !flagged.is_empty() {
        let freqs: Vec<String> = flagged.iter().map(|&i| format_number(cal.grid().get(i))).collect();
        let line = format!("{} ill-conditioned point(s) at Hz: {}", flagged.len(), freqs.join(" "));
        comments.push(line.clone());
        notes.push(line);
    }
    let out_opts = TouchstoneOptions { resistance: cal.z_ref()[0], ..raw_opts };
    Ok(TrlOutput {
        calibrated: write_touchstone_with_comments(&cal, &out_opts, &comments)?,
        gamma_csv: gamma_table(&boxes).to_csv()?,
        notes,
    })
}

/// Reads a propagation-constant table written by [`cmd_trl`]. Extra
/// columns are ignored.
pub fn read_gamma_csv(path: &Path) -> Result<PropagationConstant, CliError> {
    let text = read_text(path)?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::input(format!("{}: missing column '{name}'", path.display())))
    };
    let (fi, ai, bi) = (col("freq_hz")?, col("alpha_db_per_mm")?, col("beta_deg_per_mm")?);
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let get = |i: usize| -> Result<f64, CliError> {
            let field = rec.get(i).unwrap_or("");
            field
                .trim()
                .parse()
                .map_err(|_| CliError::input(format!("{}: row {}: '{field}' is not a number", path.display(), n + 2)))
        };
        rows.push((get(fi)?, get(ai)?, get(bi)?));
    }
    PropagationConstant::from_report_rows(&rows).map_err(|e| CliError::from(e).context(path.display()))
}

/// Effective permittivity implied by β: mean of `(βc/ω)²`, at least 1.
pub fn eps_eff_from_gamma(gamma: &PropagationConstant) -> f64 {
    let v: Vec<f64> = gamma
        .grid()
        .iter()
        .zip(gamma.beta())
        .filter(|(f, _)| *f > 0.0)
        .map(|(f, b)| (b * C0 / (2.0 * PI * f)).powi(2))
        .collect();
    if v.is_empty() {
        1.0
    } else {
        (v.iter().sum::<f64>() / v.len() as f64).max(1.0)
    }
}

/// Ripple rows for both ports of `net`, labelled `stage`. Ports without a
/// detectable period get empty spacing cells.
pub fn ripple_rows(t: &mut Table, net: &TwoPortNetwork, stage: &str, eps_r: f64) -> Result<(), CliError> {
    for port in [Port::One, Port::Two] {
        let amp = ripple_amplitude(net, port);
        let (spacing, length, peaks) = match ripple_spacing_diagnostic(net, port, eps_r) {
            Ok(r) => (Cell::Num(r.spacing_hz), Cell::Num(r.implied_length_m), Cell::from(r.peaks)),
            Err(CalError::NoPeriodicity(_)) => (Cell::Empty, Cell::Empty, Cell::from(0usize)),
            Err(e) => return Err(e.into()),
        };
        t.push(vec![stage.into(), (port.index() + 1).into(), spacing, length, peaks, amp.into()]);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeembedOutput {
    pub s2p: String,
    pub ripple: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeembedRequest {
    /// Line removed at port 1, m.
    pub l1: f64,
    /// Line removed at port 2, m; defaults to `l1`.
    pub l2: Option<f64>,
    /// Permittivity for the implied-length column; estimated from β if absent.
    pub eps_r: Option<f64>,
    pub format: TableFormat,
}

pub fn cmd_deembed(input: &Path, gamma_path: &Path, req: &DeembedRequest) -> Result<DeembedOutput, CliError> {
    let (net, opts) = read_two_port(input)?;
    let gamma = read_gamma_csv(gamma_path)?;
    if !gamma.grid().matches(net.grid()) {
        return Err(CliError::input(format!(
            "{} and {} are on different frequency grids",
            gamma_path.display(),
            input.display()
        )));
    }
    let l2 = req.l2.unwrap_or(req.l1);
    let out = deembed_line(&net, &gamma, req.l1, l2)?;
    let eps = req.eps_r.unwrap_or_else(|| eps_eff_from_gamma(&gamma));
    let mut t = Table::new(&["stage", "port", "spacing_hz", "implied_length_m", "peaks", "amplitude"]);
    ripple_rows(&mut t, &net, "before", eps)?;
    ripple_rows(&mut t, &out, "after", eps)?;
    let comments = vec![format!("de-embedded l1={} m l2={} m", format_number(req.l1), format_number(l2))];
    Ok(DeembedOutput { s2p: write_touchstone_with_comments(&out, &opts, &comments)?, ripple: t.render(req.format)? })
}
