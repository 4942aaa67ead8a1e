use thiserror::Error;

/// Errors raised by scalar, matrix and group computations.
///
/// `InsufficientPrecision` is not a failure of the input: it reports that the
/// answer depends on digits the caller did not supply.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision must be at least one digit")]
    ZeroPrecision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix is singular")]
    Singular,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("element has infinite order")]
    InfiniteOrder,
    #[error("value out of supported range: {0}")]
    OutOfRange(String),
    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
