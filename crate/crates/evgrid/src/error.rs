//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A scenario or experiment file failed to parse or validate.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The VI solver hit its iteration cap before the residual dropped
    /// below tolerance. Carries the last iterate for diagnostics.
    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    /// The scenario admits no meaningful equilibrium (e.g. no PEVG with
    /// positive demand at any nonnegative price).
    #[error("degenerate scenario: {0}")]
    Degenerate(String),

    /// Two routes that must agree disagreed beyond tolerance.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 input, 2 non-convergence, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Parse { .. } | Error::Degenerate(_) | Error::Io(_) => {
                1
            }
            Error::NonConvergence { .. } => 2,
            Error::Internal(_) => 3,
        }
    }
}
