use thiserror::Error;

pub type Result<T> = std::result::Result<T, FracError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inconsistent or incomplete configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// The requested integral does not converge for the declared decay.
    #[error("divergence error: {0}")]
    Divergence(String),
    /// Field does not fit into the periodic box with the required margin.
    #[error("embedding error: {0}")]
    Embedding(String),
    /// A numerical precondition was violated at run time.
    #[error("numerical precondition violated: {0}")]
    Precondition(String),
}

impl FracError {
    pub fn domain(msg: impl Into<String>) -> Self {
        FracError::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        FracError::Config(msg.into())
    }
}
