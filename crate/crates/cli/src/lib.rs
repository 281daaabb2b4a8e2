//! Command-line front end: built-in scenarios, file-driven classification, and
//! text/JSON reports.

pub mod config;
pub mod error;
pub mod format;
pub mod report;
pub mod run;

pub use config::{Cli, Command, OutputFormat, RunConfig};
pub use error::{CliError, EXIT_DEGENERATE, EXIT_PARSE};
pub use format::{parse_measure_file, parse_state_file, write_measure, write_state, Parsed};
pub use report::Report;
pub use run::{execute, run};
