//! Command implementations behind the `chiptrans` binary.
//!
//! Each `cmd_*` function reads its inputs from disk and returns the data it
//! would emit as a string, so the binary only decides where bytes go.
//! Errors carry an exit code: 1 for bad input, 2 for numerical failure.

mod cal;
mod error;
mod io;
mod link;
mod network;
mod table;
mod transition;

pub use cal::{
    cmd_deembed, cmd_trl, eps_eff_from_gamma, gamma_table, load_standards, read_gamma_csv, DeembedOutput, DeembedRequest,
    TrlManifest, TrlOutput,
};
pub use error::CliError;
pub use io::{parse_grid_ghz, parse_stepped, read_touchstone, read_two_port};
pub use link::{capacity_table, cmd_linkbudget, load_link_config, parse_link_config, sensitivity_table, LinkReport};
pub use network::{cmd_convert, cmd_gmax, gmax_table};
pub use table::{format_number, Cell, Table, TableFormat};
pub use transition::{cmd_model, cmd_notch, cmd_siw, MatchRequest, ModelRequest, ModelSource, NotchRequest};
