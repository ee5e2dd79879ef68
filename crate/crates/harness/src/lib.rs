//! Experiment orchestration for the IRS broadcast-channel toolkit: Table-style
//! configuration, homogeneous path-gain computation, Monte Carlo sum-rate
//! campaigns, energy-efficiency solver runs, oracle validation and the file
//! formats the `irsbc` binary writes.

pub mod config;
pub mod eerun;
pub mod output;
pub mod pathloss;
pub mod sumrate;
pub mod validate;

pub use config::{ExperimentConfig, Scheme};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Core(#[from] irsbc_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code: 2 for configuration problems, 3 for tripped
    /// numerical guards, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Core(irsbc_core::Error::InvalidArgument(_)) => 2,
            HarnessError::Core(_) => 3,
            HarnessError::Io(_) => 1,
        }
    }
}
