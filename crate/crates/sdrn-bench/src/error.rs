//! Error type for the benchmark harness, carrying the process exit code.

use std::fmt;

/// Failure classes map one-to-one onto CLI exit codes: input/config
/// problems exit 1, dataset acquisition problems exit 2, and anything that
/// indicates a bug in the harness itself exits 3.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("input error: {0}")]
    Input(String),
    #[error("dataset acquisition error: {0}")]
    Acquisition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl BenchError {
    pub fn exit_code(&self) -> u8 {
        match self {
            BenchError::Input(_) => 1,
            BenchError::Acquisition(_) => 2,
            BenchError::Internal(_) => 3,
        }
    }

    /// Wraps an IO failure on a user-supplied path as an input error.
    pub fn io(context: &str, err: impl fmt::Display) -> BenchError {
        BenchError::Input(format!("{context}: {err}"))
    }
}

impl From<sdrn::SdrnError> for BenchError {
    fn from(err: sdrn::SdrnError) -> Self {
        use sdrn::SdrnError::*;
        match err {
            InvalidConfig(_) | ChannelMismatch { .. } | DimensionMismatch { .. }
            | NonFinite { .. } | EmptyInput | KTooLarge { .. } => {
                BenchError::Input(err.to_string())
            }
            other => BenchError::Internal(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
