//! Command-line plumbing for the Bachelier toolkit: configuration, CSV
//! ingestion, parameter estimation, command dispatch and figure data.

pub mod commands;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod estimate;
pub mod figures;

pub use commands::{run_command, Report};
pub use config::RunConfig;
pub use error::{CliError, Result};
