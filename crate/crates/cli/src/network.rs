use std::path::Path;

use chiptrans::netcore::gmax;
use chiptrans::touchstone::{write_touchstone, write_touchstone_one_port, DataFormat, TouchstoneData};
use chiptrans::units::db20;
use chiptrans::TwoPortNetwork;

use crate::io::{read_touchstone, read_two_port};
use crate::table::{Table, TableFormat};
use crate::CliError;

/// Floor for magnitudes printed in dB, so exact zeros stay finite.
const DB_FLOOR: f64 = -400.0;

fn mag_db(x: f64) -> f64 {
    db20(x).max(DB_FLOOR)
}

/// Rewrites a Touchstone file in another data format, keeping frequency
/// unit and reference resistance. One-port files pass through as one-port.
pub fn cmd_convert(input: &Path, format: DataFormat) -> Result<String, CliError> {
    let (data, mut opts) = read_touchstone(input)?;
    opts.format = format;
    Ok(match data {
        TouchstoneData::TwoPort(net) => write_touchstone(&net, &opts)?,
        TouchstoneData::OnePort(net) => write_touchstone_one_port(&net, &opts, &[])?,
    })
}

/// G_max per point, with |S11| and |S21| alongside so notches and matches
/// are visible in the same table. `gmax_db` is empty where the network is
/// unilateral.
pub fn gmax_table(net: &TwoPortNetwork) -> Table {
    let g = gmax(net);
    let mut t = Table::new(&["freq_hz", "gmax_db", "stable", "unilateral", "s11_db", "s21_db"]);
    for (i, f) in net.grid().iter().enumerate() {
        let s = &net.s()[i];
        t.push(vec![
            f.into(),
            g.gmax_db[i].into(),
            g.stable[i].into(),
            g.gmax_db[i].is_none().into(),
            mag_db(s.at(1, 1).norm()).into(),
            mag_db(s.at(2, 1).norm()).into(),
        ]);
    }
    t
}

pub fn cmd_gmax(input: &Path, format: TableFormat) -> Result<String, CliError> {
    let (net, _) = read_two_port(input)?;
    gmax_table(&net).render(format)
}
