use std::fmt;

use spherelok::Error;

/// A command failure with its process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable or unwritable paths. Exit code 2.
    Usage(String),
    /// Malformed or mismatched input files. Exit code 3.
    Format(String),
    /// A numeric contract did not hold. Exit code 4.
    Numeric(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Format(_) => 3,
            Failure::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Format(m) => write!(f, "format error: {m}"),
            Failure::Numeric(m) => write!(f, "numeric contract violated: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Format { .. } | Error::DimensionMismatch { .. } | Error::BandMismatch { .. } => Failure::Format(msg),
            Error::NumericContract(_) | Error::NotUnitNorm(_) => Failure::Numeric(msg),
            Error::IndexOutOfRange { .. }
            | Error::OutOfDomain(_)
            | Error::InvalidBand { .. }
            | Error::OrderOutOfRange { .. }
            | Error::CoincidentArguments(_)
            | Error::InvalidParameter(_)
            | Error::WindowSpec(_)
            | Error::Io(_) => Failure::Usage(msg),
        }
    }
}

pub type Outcome<T = ()> = std::result::Result<T, Failure>;

/// Attaches the path to an I/O-level failure.
pub fn at_path(path: &std::path::Path) -> impl FnOnce(Error) -> Failure + '_ {
    move |e| match Failure::from(e) {
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
        Failure::Format(m) => Failure::Format(format!("{}: {m}", path.display())),
        Failure::Numeric(m) => Failure::Numeric(format!("{}: {m}", path.display())),
    }
}
