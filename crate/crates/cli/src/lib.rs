//! Experiment harness, output formats and command-line interface on top of
//! [`qmean_core`] and [`qmean_oracle`].
//!
//! - [`experiments`]: Monte Carlo sweeps (RMSE, Fisher landscape, level
//!   convergence, normality, calibration) parallelized with rayon.
//! - [`config`]: TOML run configuration.
//! - [`report`]: CSV and JSON output with round-trippable floats.
//! - [`cli`]: the `qmean` binary.

pub mod cli;
pub mod config;
mod error;
pub mod experiments;
pub mod report;

pub use error::{CliError, Result};
