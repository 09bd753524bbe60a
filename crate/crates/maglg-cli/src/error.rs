//! CLI error type and its mapping to process exit codes.

use std::path::PathBuf;

use thiserror::Error;

/// Exit code 0 is success; these are the failure classes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad config file, contradictory or nonphysical inputs.
    /// Exit code 2, matching the code used for unparsable command lines.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical validation or computation failed. Exit code 3.
    #[error("numerical validation failed: {0}")]
    Numerical(String),

    /// Filesystem failure while emitting results. Exit code 1.
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<maglg::Error> for CliError {
    fn from(err: maglg::Error) -> Self {
        match err {
            // Requesting magnetic quantities without a field is a
            // configuration mistake, not a numerical failure.
            maglg::Error::FreeSpace => CliError::Config(
                "this command requires a magnetic field; set B_tesla > 0".into(),
            ),
            // Up-front rejections of user-chosen resolutions are also
            // configuration mistakes: the run never started.
            e @ (maglg::Error::StepTooLarge { .. }
            | maglg::Error::GridCoverage { .. }
            | maglg::Error::NonUniformGrid) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}
