//! Library surface of the `mcdart` command line tool: configuration handling,
//! the experiment commands, and the CSV/SVG writers. The binary adds argument
//! parsing on top.

pub mod cli_error;
pub mod commands;
pub mod config;
pub mod csvout;
pub mod svg;

pub use cli_error::{CliError, CliResult};
pub use config::ExperimentConfig;
