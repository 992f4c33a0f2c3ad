//! Command-line driver for `susy-dirac-core`: figure data in CSV/JSON and the
//! validation report.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod verify;

pub use error::{CliError, Result};
