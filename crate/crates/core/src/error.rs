//! Error type shared by all library modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (dimension mismatch, negative gain, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computational budget guard tripped (e.g. the phase-grid enumeration
    /// would exceed the configured budget). The message carries the required
    /// budget so callers can decide whether to raise the guard.
    #[error("budget guard tripped: {0}")]
    Guard(String),

    /// Eigenvalues too close for a partial-fraction form that assumes they
    /// are distinct. Perturb the input (see `jitter_eigenvalues`) or avoid
    /// the degenerate configuration.
    #[error("degenerate eigenvalues: {0}")]
    DegenerateEigenvalues(String),

    /// A bracketing root search could not find a sign change.
    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    /// A matrix that must be positive (semi)definite is not, beyond the
    /// numerical tolerance.
    #[error("matrix not positive semidefinite: {0}")]
    NotPsd(String),
}

pub type Result<T> = std::result::Result<T, Error>;
