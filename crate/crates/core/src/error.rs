use thiserror::Error;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Matrix or vector dimensions do not agree with the requested bipartite shape.
    #[error("shape error: {0}")]
    Shape(String),
    /// A parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Non-finite input or a failed numerical kernel.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// The input lies outside the domain of the operation (e.g. Kreweras of a crossing partition).
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
