//! Two-port network toolkit for chip-to-package transitions.
//!
//! The crate is organised by concern:
//!
//! * [`netcore`] complex two-port algebra: conversions, interconnections,
//!   renormalization, Rollett stability and maximum available gain.
//! * [`touchstone`] Touchstone v1 reader/writer for 1- and 2-port S data.
//! * [`tline`] transmission-line two-ports, Huray roughness and
//!   propagation-constant extraction.
//! * [`transitions`] GSG and shielded-stripline transition models and
//!   closed-form notch/cutoff predictors.
//! * [`calibration`] TRL calibration, line de-embedding and ripple
//!   diagnostics.
//! * [`linkbudget`] SNR, capacity and loss-sensitivity calculations.
//!
//! Per-frequency work runs on rayon when the `parallel` feature is enabled
//! (the default); without it every loop runs sequentially with identical
//! results.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod linkbudget;
pub mod netcore;
pub mod par;
pub mod tline;
pub mod touchstone;
pub mod transitions;
pub mod units;

pub use num_complex::Complex64;

pub use tline::PropagationConstant;
pub use netcore::{FrequencyGrid, GainProfile, Mat2, NetError, OnePortNetwork, Port, TwoPortNetwork};

