//! Crate-wide error type.
//!
//! A single enum keeps error propagation simple across modules and maps
//! one-to-one onto the CLI exit-code classes: parse errors (exit 1),
//! numerical failures (exit 2), and missing-feature conditions (exit 3).

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure class, used to pick CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Input could not be read or parsed, or referenced an unknown name.
    Parse,
    /// A numerical procedure failed (singularity, non-convergence, ...).
    Numeric,
    /// The requested feature (resonance, peak pair, mode) is not present
    /// in the data.
    FeatureNotFound,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular (pivot below tolerance)")]
    SingularMatrix,

    #[error("sample {index} has zero magnitude; phase is undefined")]
    ZeroMagnitudeSample { index: usize },

    #[error("root refinement did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error(
        "time step {dt:.3e} s too large; must satisfy dt*omega0 <= 2*pi/50 (limit {limit:.3e} s)"
    )]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("operation requires a positive coupling rate kappa")]
    ZeroKappa,

    #[error("junction matrix (I - s_CC e^{{-j phi0}}) is singular")]
    SingularJunction,

    #[error("coupling coefficient {value} out of range; |zeta| must be < 1")]
    CouplingOutOfRange { value: f64 },

    #[error("normal-mode splitting smaller than bare detuning; cannot extract coupling")]
    InvalidSplitting,

    #[error("network response is singular at the requested frequency")]
    SingularResponse,

    #[error("coupled-line section is resonant (sin theta = 0); admittance undefined")]
    SingularAtResonantLength,

    #[error("element '{name}' is singular at {freq_hz:.6e} Hz (stub/line resonance)")]
    ElementSingularAtFrequency { name: String, freq_hz: f64 },

    #[error("network admittance is singular at {freq_hz:.6e} Hz")]
    SingularNetwork { freq_hz: f64 },

    #[error("no resonant mode found in the requested frequency window")]
    NoModeInWindow,

    #[error("phase fit residual {rms:.3e} rad RMS exceeds tolerance; mode not isolated?")]
    PoorFit { rms: f64 },

    #[error("feature not found: {what}")]
    FeatureNotFound { what: String },

    #[error("parse error at line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("unknown node or port name '{name}'")]
    UnknownNode { name: String },

    #[error("duplicate element or port name '{name}'")]
    DuplicateName { name: String },

    #[error("invalid argument: {message}")]
    InvalidArgument { message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Classify for exit-code mapping.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. }
            | Error::UnknownNode { .. }
            | Error::DuplicateName { .. }
            | Error::Io(_) => ErrorClass::Parse,
            Error::FeatureNotFound { .. } | Error::NoModeInWindow => ErrorClass::FeatureNotFound,
            _ => ErrorClass::Numeric,
        }
    }

    /// Convenience constructor for invalid-argument errors.
    pub fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            message: message.into(),
        }
    }

    /// Convenience constructor for feature-not-found errors.
    pub fn not_found(what: impl Into<String>) -> Self {
        Error::FeatureNotFound { what: what.into() }
    }
}
