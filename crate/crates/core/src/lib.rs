//! Simulation and analysis of an XOR game that certifies a single photon's
//! path superposition using only local measurements and a second,
//! independently superposed photon.
//!
//! - [`optics`]: interferometer unitary and exact two-photon statistics.
//! - [`state`]: test-photon density matrix and the dephasing parameterizations.
//! - [`game`]: closed-form win probabilities and seeded Monte Carlo play.
//! - [`stats`]: efficiency normalization and binomial confidence.
//! - [`calibration`]: HOM-dip, phase-reference and detector-efficiency scans.
//! - [`harness`]: run configuration, file formats and the command pipelines.

pub mod calibration;
pub mod error;
pub mod game;
pub mod harness;
pub mod optics;
pub mod rng;
pub mod state;
pub mod stats;

pub use error::{Error, Result};

/// Crate version embedded into every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
