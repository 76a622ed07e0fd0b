//! Command-line front end: JSON experiment configs in, JSON or CSV reports out.

pub mod config;
pub mod error;
pub mod experiment;
pub mod report;
pub mod sweep;
pub mod verify;

pub use config::{parse_config, ExperimentConfig};
pub use error::{CliError, CliResult};
pub use experiment::run;
pub use report::{emit, emit_sweep, Format, Report};
