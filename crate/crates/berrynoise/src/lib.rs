//! File formats, parameter sweeps and the command-line front end for
//! `berrynoise-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod manifest;
pub mod sweep;

pub use config::RunConfig;
pub use error::{CliError, Result};
