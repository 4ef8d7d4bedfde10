use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("argument {0} lies outside [-1, 1]")]
    OutOfDomain(f64),

    #[error("invalid band limits: n = {n}, m = {m} (need 0 <= m <= n)")]
    InvalidBand { n: usize, m: usize },

    #[error("order k = {k} exceeds the band limit {limit}")]
    OrderOutOfRange { k: i64, limit: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("band parameters differ: expected (n = {expected_n}, m = {expected_m}), got (n = {n}, m = {m})")]
    BandMismatch {
        expected_n: usize,
        expected_m: usize,
        n: usize,
        m: usize,
    },

    #[error("coincident arguments x = y = {0}")]
    CoincidentArguments(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input must have unit norm, got squared norm {0}")]
    NotUnitNorm(f64),

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("invalid window specification: {0}")]
    WindowSpec(String),

    #[error("numeric contract violated: {0}")]
    NumericContract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
