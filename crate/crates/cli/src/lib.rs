//! Library half of the `zitterkit` command-line tool: run configuration,
//! the study commands and deterministic artifact output.

pub mod commands;
pub mod config;
pub mod output;

use zitterkit_core::Error;

/// Why a run stopped. Each variant owns one process exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Failure {
    #[error("check failed: {}", .0.join(", "))]
    Check(Vec<String>),
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Check(_) => EXIT_CHECK,
            Failure::Config(_) | Failure::Io(_) => EXIT_CONFIG,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidRepresentation(_)
            | Error::InvalidArgument(_)
            | Error::IndexOutOfRange { .. }
            | Error::DimensionMismatch { .. } => Failure::Config(e.to_string()),
            Error::NonFinite
            | Error::NonConvergence { .. }
            | Error::IllConditioned { .. }
            | Error::Singular
            | Error::ZeroMomentum(_)
            | Error::MixedBranch(..)
            | Error::IndefiniteNorm(_) => Failure::Numerical(e.to_string()),
        }
    }
}
