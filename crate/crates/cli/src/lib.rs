//! Command-line front end: argument parsing, dispatch into the library and
//! JSON/CSV reporting. Exit codes are 0 when every check passes, 1 when a
//! check fails and 2 for usage or precondition errors.

pub mod args;
mod commands;
pub mod report;

pub use commands::{execute, Execution};
pub use report::{RunReport, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] isoball::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub const EXIT_USAGE: u8 = 2;
