use std::path::Path;

use chiptrans::netcore::Port;
use chiptrans::touchstone::{write_touchstone_with_comments, DataFormat, FreqUnit, TouchstoneOptions};
use chiptrans::transitions::{
    apply_series_match, design_series_match, gsg_model, gsg_notch_harmonics, loop_radiation_freq, pitch_notch_estimate,
    siw_cutoff_for, siw_effective_width, stripline_transition_model, GsgGeometry, GsgParams, MatchDesign, SearchRange,
    SiwGeometry, StriplineTransitionParams,
};
use serde::de::DeserializeOwned;

use crate::io::{parse_grid_ghz, read_text};
use crate::table::{format_number as f, Table, TableFormat};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NotchRequest {
    /// Return-path notch `k/(2τ2)`, k = 1..=harmonics.
    GsgDelay { tau2: f64, harmonics: usize },
    GsgPitch(GsgGeometry),
    Loop { tau1: f64, tau2: f64 },
}

pub fn cmd_notch(req: &NotchRequest, format: TableFormat) -> Result<String, CliError> {
    let mut t = Table::new(&["mode", "order", "f_hz"]);
    match *req {
        NotchRequest::GsgDelay { tau2, harmonics } => {
            for (k, f) in gsg_notch_harmonics(tau2, harmonics.max(1))?.into_iter().enumerate() {
                t.push(vec!["gsg-delay".into(), (k + 1).into(), f.into()]);
            }
        }
        NotchRequest::GsgPitch(g) => t.push(vec!["gsg-pitch".into(), 1usize.into(), pitch_notch_estimate(&g)?.into()]),
        NotchRequest::Loop { tau1, tau2 } => t.push(vec!["loop".into(), 1usize.into(), loop_radiation_freq(tau1, tau2)?.into()]),
    }
    t.render(format)
}

pub fn cmd_siw(g: &SiwGeometry, format: TableFormat) -> Result<String, CliError> {
    let w_eff = siw_effective_width(g)?;
    let fc = siw_cutoff_for(g)?;
    let mut t = Table::new(&["w_eff_m", "f_cutoff_hz"]);
    t.push(vec![w_eff.into(), fc.into()]);
    t.render(format)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSource<'a> {
    Gsg(&'a Path),
    Stripline(&'a Path),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchRequest {
    pub f0: f64,
    pub side: Port,
    pub z0_range: SearchRange,
    pub theta_range: SearchRange,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelRequest<'a> {
    pub grid_ghz: &'a str,
    pub z_ref: f64,
    pub format: DataFormat,
    pub matching: Option<MatchRequest>,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::from(e).context(path.display()))
}

fn port_number(p: Port) -> usize {
    p.index() + 1
}

/// Touchstone file of a transition circuit model, optionally with a series
/// matching line designed at `f0` on one port.
pub fn cmd_model(source: &ModelSource<'_>, req: &ModelRequest<'_>) -> Result<(String, Option<MatchDesign>), CliError> {
    let grid = parse_grid_ghz(req.grid_ghz)?;
    let (mut net, mut comments) = match source {
        ModelSource::Gsg(path) => {
            let p: GsgParams = read_json(path)?;
            let net = gsg_model(&p, &grid, req.z_ref)?;
            (net, vec![format!("GSG model: z1={} tau1={} z2={} tau2={}", f(p.z1), f(p.tau1), f(p.z2), f(p.tau2))])
        }
        ModelSource::Stripline(path) => {
            let p: StriplineTransitionParams = read_json(path)?;
            let net = stripline_transition_model(&p, &grid, req.z_ref)?;
            (net, vec![format!("stripline model: c_pad={} z_via={} tau_via={}", f(p.c_pad), f(p.z_via), f(p.tau_via))])
        }
    };
    let mut design = None;
    if let Some(m) = req.matching {
        let d = design_series_match(&net, m.f0, m.side, m.z0_range, m.theta_range)?;
        net = apply_series_match(&net, &d.matched, m.side)?;
        comments.push(format!(
            "series match at port {}: z0={} ohm theta={} deg at f0={} Hz; |S{}{}(f0)| {} -> {}",
            port_number(m.side),
            d.matched.z0,
            d.matched.theta_deg,
            f(d.matched.f0),
            port_number(m.side),
            port_number(m.side),
            d.unmatched_reflection,
            d.reflection
        ));
        design = Some(d);
    }
    let opts = TouchstoneOptions { freq_unit: FreqUnit::GHz, format: req.format, resistance: req.z_ref };
    Ok((write_touchstone_with_comments(&net, &opts, &comments)?, design))
}
