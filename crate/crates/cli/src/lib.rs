//! Command-line front end for `hessemon`: subcommands, run configuration,
//! JSONL run records and the verification suites.

pub mod commands;
pub mod config;
pub mod record;
pub mod suites;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),

    #[error(transparent)]
    Core(#[from] hessemon::Error),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure, 4 for failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 2,
            CliError::Core(e) if e.is_usage() => 2,
            CliError::Core(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(hessemon::Error::Schema("x".into())).exit_code(), 2);
        assert_eq!(CliError::Core(hessemon::Error::NoCrossingFound).exit_code(), 3);
        assert_eq!(CliError::Verification("x".into()).exit_code(), 4);
    }
}
