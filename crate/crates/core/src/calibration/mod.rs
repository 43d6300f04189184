//! TRL calibration, error-box removal and reference-plane shifting.
//!
//! Error boxes follow the cascade (T) convention `[b1; a1] = T·[a2; b2]`, so
//! a measurement is `M = X·D·Y` with `X` the port-1 box (VNA side first) and
//! `Y` the port-2 box (DUT side first). An ideal thru of zero length defines
//! the reference planes.

mod deembed;
mod ripple;
mod trl;

pub use deembed::{deembed_line, embed_line};
pub use ripple::{ripple_amplitude, ripple_spacing_diagnostic, RippleReport};
pub use trl::{
    apply_cal, trl_calibrate, ErrorBoxes, ReflectKind, TrlOptions, TrlPointStatus, TrlReference, TrlStandards,
    DEGENERATE_GAP, PASSIVITY_CONTRAST,
};

use thiserror::Error;

use crate::netcore::NetError;
use crate::tline::TlineError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Line(#[from] TlineError),
    #[error("invalid standard: {0}")]
    InvalidStandard(String),
    #[error("ill-conditioned calibration at point indices {points:?}; enable interpolation over degenerate points or change the line standard")]
    IllConditioned { points: Vec<usize> },
    #[error("no usable calibration point")]
    NoUsablePoint,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no detectable periodicity: {0}")]
    NoPeriodicity(String),
}
