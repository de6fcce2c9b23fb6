use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Invalid configuration (empty mode list, mismatched mode counts, ...).
    #[error("configuration error: {0}")]
    Config(String),
    /// A mode, component, or level index outside the valid range.
    #[error("index error: {0}")]
    Index(String),
    /// Operands live on different spaces or have inconsistent dimensions.
    #[error("shape error: {0}")]
    Shape(String),
    /// An input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The operation was called in a way its contract does not allow.
    #[error("usage error: {0}")]
    Usage(String),
    /// The requested atomic transition label does not exist.
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    /// A numerical validity or convergence check failed.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A measurement outcome with (numerically) zero probability was selected,
    /// so no conditional post-state can be formed.
    #[error("outcome probability {probability:.3e} is too small to condition on")]
    ImpossibleOutcome { probability: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
