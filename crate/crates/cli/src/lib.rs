//! Batch experiment driver for the dhlab library: config parsing, experiment plans and reports.

pub mod config;
pub mod experiments;
pub mod report;

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(dhlab::Error),
    Io(String),
    Check(String),
}

impl From<dhlab::Error> for CliError {
    fn from(e: dhlab::Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
            CliError::Check(m) => write!(f, "self-check failed: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use dhlab::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Lib(E::Validation { .. } | E::Domain { .. } | E::Lookup { .. }) => 2,
            CliError::Lib(E::Resource { .. }) => 3,
            CliError::Lib(E::Numeric { .. } | E::Invariant { .. }) => 4,
            CliError::Check(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}
