use thiserror::Error;

/// Errors shared by every crate of the workspace.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two objects that must live on the same type set do not.
    #[error("type-set mismatch: {0}")]
    TypeMismatch(String),
    /// Dimensions of a vector or matrix are inconsistent.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A value that must be non-negative (weight, kernel entry, fitness) is negative.
    #[error("negative entry: {0}")]
    Negative(String),
    /// Structural validation failed (e.g. the disintegration equation).
    #[error("validation failed: {0}")]
    Validation(String),
    /// A quantity needed as a divisor or a logarithm argument vanishes.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A parameter lies outside its admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// Two processes cannot be chained.
    #[error("processes are not composable: {0}")]
    NotComposable(String),
    /// Any other invalid argument.
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Shorthand result type.
pub type Result<T> = std::result::Result<T, Error>;
