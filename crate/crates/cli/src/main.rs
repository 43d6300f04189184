use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chiptrans::netcore::Port;
use chiptrans::touchstone::DataFormat;
use chiptrans::transitions::{GsgGeometry, SearchRange, SiwGeometry};
use chiptrans_cli::*;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Two-port tools for chip-to-package transitions: Touchstone conversion,
/// G_max tables, notch and cutoff estimates, TRL calibration, de-embedding,
/// link budgets and circuit models.
#[derive(Debug, Parser)]
#[command(name = "chiptrans", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Write data here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableOut {
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    table: TableFormat,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NotchMode {
    GsgDelay,
    GsgPitch,
    Loop,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PortArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rewrite a Touchstone file in another data format.
    Convert {
        input: PathBuf,
        /// ri, ma or db.
        #[arg(long)]
        format: DataFormat,
        #[command(flatten)]
        output: Output,
    },
    /// G_max, stability and |S11|/|S21| per frequency of a two-port file.
    Gmax {
        input: PathBuf,
        #[command(flatten)]
        out: TableOut,
    },
    /// Closed-form notch frequency estimates.
    Notch {
        #[arg(long, value_enum)]
        mode: NotchMode,
        /// Return-path delay, ps (gsg-delay, loop).
        #[arg(long)]
        tau2_ps: Option<f64>,
        /// Bump delay, ps (loop).
        #[arg(long)]
        tau1_ps: Option<f64>,
        /// Number of notch harmonics to list (gsg-delay).
        #[arg(long, default_value_t = 1)]
        harmonics: usize,
        /// Footprint-to-footprint distance, µm (gsg-pitch).
        #[arg(long)]
        h_um: Option<f64>,
        /// Bump pitch, µm (gsg-pitch).
        #[arg(long)]
        pitch_um: Option<f64>,
        /// Underfill permittivity (gsg-pitch).
        #[arg(long)]
        eps_r: Option<f64>,
        #[command(flatten)]
        out: TableOut,
    },
    /// Effective width and TE10 cutoff of a via-cage waveguide.
    Siw {
        /// Via row spacing, µm.
        #[arg(long)]
        w_um: f64,
        /// Via diameter, µm.
        #[arg(long)]
        d_um: f64,
        /// Via pitch, µm.
        #[arg(long)]
        p_um: f64,
        #[arg(long)]
        eps_r: f64,
        #[command(flatten)]
        out: TableOut,
    },
    /// TRL-calibrate a raw DUT measurement.
    Trl {
        /// JSON manifest naming the standards.
        #[arg(long)]
        manifest: PathBuf,
        /// Raw DUT two-port file.
        dut: PathBuf,
        /// Calibrated DUT file.
        #[arg(long, short)]
        out: PathBuf,
        /// Propagation-constant table [default: gamma.csv next to --out].
        #[arg(long)]
        gamma_out: Option<PathBuf>,
    },
    /// Remove matched line from each port and report ripple before/after.
    Deembed {
        input: PathBuf,
        /// Propagation-constant table as written by `trl`.
        #[arg(long)]
        gamma: PathBuf,
        /// Line removed at port 1, mm.
        #[arg(long)]
        l1_mm: f64,
        /// Line removed at port 2, mm [default: same as port 1].
        #[arg(long)]
        l2_mm: Option<f64>,
        /// Permittivity for the implied remnant length [default: from gamma].
        #[arg(long)]
        eps_r: Option<f64>,
        /// De-embedded file.
        #[arg(long, short)]
        out: PathBuf,
        /// Ripple report format (written to stdout).
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        table: TableFormat,
    },
    /// Capacity against transition loss, or the loss sensitivity.
    Linkbudget {
        #[arg(long)]
        config: PathBuf,
        /// One-way loss sweep start:stop:step in dB.
        #[arg(long, default_value = "0:6:0.5", conflicts_with = "sensitivity")]
        il_sweep: String,
        /// Report the high-SNR capacity slope instead of a sweep.
        #[arg(long)]
        sensitivity: bool,
        #[command(flatten)]
        out: TableOut,
    },
    /// Touchstone file of a transition circuit model.
    Model {
        /// GSG parameters JSON {z1, tau1, z2, tau2} in ohm and s.
        #[arg(long, conflicts_with = "stripline", required_unless_present = "stripline")]
        gsg: Option<PathBuf>,
        /// Stripline parameters JSON {c_pad, z_via, tau_via} in F, ohm, s.
        #[arg(long)]
        stripline: Option<PathBuf>,
        /// start:stop:npoints in GHz.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 50.0)]
        z_ref: f64,
        #[arg(long, default_value = "ri")]
        format: DataFormat,
        /// Design a series matching line at this frequency, GHz.
        #[arg(long)]
        match_f0_ghz: Option<f64>,
        #[arg(long, value_enum, default_value_t = PortArg::One)]
        match_port: PortArg,
        /// Line impedance search start:stop:step, ohm.
        #[arg(long, default_value = "10:100:0.5")]
        match_z0: String,
        /// Line length search start:stop:step, degrees at f0.
        #[arg(long, default_value = "0:90:0.25")]
        match_theta: String,
        #[command(flatten)]
        output: Output,
    },
}

fn emit(output: &Output, data: &str) -> Result<(), CliError> {
    write_to(output.out.as_deref(), data)
}

fn write_to(path: Option<&Path>, data: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, data).map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn need(v: Option<f64>, flag: &str, mode: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::input(format!("--mode {mode} needs --{flag}")))
}

fn range(spec: &str) -> Result<SearchRange, CliError> {
    let (a, b, s) = parse_stepped(spec)?;
    SearchRange::new(a, b, s).map_err(CliError::from)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convert { input, format, output } => emit(&output, &cmd_convert(&input, format)?),
        Command::Gmax { input, out } => emit(&out.output, &cmd_gmax(&input, out.table)?),
        Command::Notch { mode, tau2_ps, tau1_ps, harmonics, h_um, pitch_um, eps_r, out } => {
            let req = match mode {
                NotchMode::GsgDelay => NotchRequest::GsgDelay { tau2: need(tau2_ps, "tau2-ps", "gsg-delay")? * 1e-12, harmonics },
                NotchMode::Loop => NotchRequest::Loop {
                    tau1: need(tau1_ps, "tau1-ps", "loop")? * 1e-12,
                    tau2: need(tau2_ps, "tau2-ps", "loop")? * 1e-12,
                },
                NotchMode::GsgPitch => NotchRequest::GsgPitch(GsgGeometry {
                    h: need(h_um, "h-um", "gsg-pitch")? * 1e-6,
                    pitch: need(pitch_um, "pitch-um", "gsg-pitch")? * 1e-6,
                    eps_r: need(eps_r, "eps-r", "gsg-pitch")?,
                }),
            };
            emit(&out.output, &cmd_notch(&req, out.table)?)
        }
        Command::Siw { w_um, d_um, p_um, eps_r, out } => {
            let g = SiwGeometry { w: w_um * 1e-6, d: d_um * 1e-6, p: p_um * 1e-6, eps_r };
            emit(&out.output, &cmd_siw(&g, out.table)?)
        }
        Command::Trl { manifest, dut, out, gamma_out } => {
            let r = cmd_trl(&manifest, &dut)?;
            for n in &r.notes {
                eprintln!("warning: {n}");
            }
            let gamma_path = gamma_out.unwrap_or_else(|| out.with_file_name("gamma.csv"));
            write_to(Some(&out), &r.calibrated)?;
            write_to(Some(&gamma_path), &r.gamma_csv)
        }
        Command::Deembed { input, gamma, l1_mm, l2_mm, eps_r, out, table } => {
            let req = DeembedRequest { l1: l1_mm * 1e-3, l2: l2_mm.map(|l| l * 1e-3), eps_r, format: table };
            let r = cmd_deembed(&input, &gamma, &req)?;
            write_to(Some(&out), &r.s2p)?;
            write_to(None, &r.ripple)
        }
        Command::Linkbudget { config, il_sweep, sensitivity, out } => {
            let report = if sensitivity { LinkReport::Sensitivity } else { LinkReport::Sweep(&il_sweep) };
            emit(&out.output, &cmd_linkbudget(&config, report, out.table)?)
        }
        Command::Model { gsg, stripline, grid, z_ref, format, match_f0_ghz, match_port, match_z0, match_theta, output } => {
            let source = match (&gsg, &stripline) {
                (Some(p), _) => ModelSource::Gsg(p),
                (None, Some(p)) => ModelSource::Stripline(p),
                (None, None) => return Err(CliError::input("give --gsg or --stripline")),
            };
            let matching = match match_f0_ghz {
                Some(f0) => Some(MatchRequest {
                    f0: f0 * 1e9,
                    side: match match_port {
                        PortArg::One => Port::One,
                        PortArg::Two => Port::Two,
                    },
                    z0_range: range(&match_z0)?,
                    theta_range: range(&match_theta)?,
                }),
                None => None,
            };
            let req = ModelRequest { grid_ghz: &grid, z_ref, format, matching };
            let (data, design) = cmd_model(&source, &req)?;
            if let Some(d) = design {
                eprintln!(
                    "matched: z0 = {} ohm, theta = {} deg; reflection at f0 {:.4} -> {:.4}",
                    d.matched.z0, d.matched.theta_deg, d.unmatched_reflection, d.reflection
                );
            }
            emit(&output, &data)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
