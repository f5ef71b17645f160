/// Crate-wide error type.
///
/// The variants mirror how callers should react: `DimensionMismatch` and
/// `InvalidInput` are caller bugs, `InvalidConfig` rejects experiment
/// configurations up front, `Numeric` reports a solver failure, and
/// `Protocol` flags out-of-order predict/update calls or an impossible
/// observation (e.g. feedback inconsistent with an optimal agent).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("round {round}: {source}")]
    AtRound {
        round: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach the 1-based round index at which this error occurred.
    pub fn at_round(self, round: usize) -> Error {
        Error::AtRound {
            round,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
