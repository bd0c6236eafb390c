use thiserror::Error;

/// Experiment-level failures, split by exit code: configuration problems
/// exit with 2, numeric/domain problems with 3.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Numeric(#[from] pyor::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) => 2,
            SimError::Numeric(_) | SimError::Io(_) => 3,
        }
    }
}

pub type SimResult<T> = std::result::Result<T, SimError>;
