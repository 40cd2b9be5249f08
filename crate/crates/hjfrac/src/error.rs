//! Error type shared across the crate, with a stable mapping to process
//! exit codes for the CLI.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum HjError {
    /// Invalid configuration: bad parameter values, inconsistent grids,
    /// malformed config files, unknown problem ids, and so on.
    #[error("configuration error: {0}")]
    Config(String),

    /// A CFL/monotonicity condition is violated and the run was not
    /// explicitly allowed to proceed.
    #[error("CFL condition violated: {0}")]
    Cfl(String),

    /// A non-finite value (NaN or infinity) appeared in the solution.
    #[error("non-finite value detected: {0}")]
    NonFinite(String),

    /// A verification property that must hold was found violated.
    #[error("property violation: {0}")]
    Property(String),

    /// An exact-solution oracle cannot serve the requested evaluation
    /// (for example, a time past its validity horizon).
    #[error("oracle unavailable: {0}")]
    Oracle(String),

    /// Underlying I/O failure while reading or writing artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl HjError {
    /// Process exit code for this error.
    ///
    /// 2 = configuration (including I/O, JSON, and oracle availability),
    /// 3 = CFL violation, 4 = non-finite values, 5 = property violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            HjError::Config(_) | HjError::Oracle(_) | HjError::Io(_) | HjError::Json(_) => 2,
            HjError::Cfl(_) => 3,
            HjError::NonFinite(_) => 4,
            HjError::Property(_) => 5,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, HjError>;
