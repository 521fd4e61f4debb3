use alloc::string::String;
use core::fmt;

/// Errors raised by the lattice primitives, oracles, classifiers and minimizers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two lattice objects disagree on the ambient dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// A level-set decomposition was requested for `x == y`.
    EmptyDecomposition,
    /// An argument violates an operation's precondition.
    InvalidArgument(String),
    /// A value or structure was rejected on construction.
    Rejected(String),
    /// The enumeration would exceed the configured cap.
    ResourceLimit { requested: u128, limit: u128 },
    /// A point is outside the effective domain where a finite value is required.
    NotInDomain,
    /// The envelope LP failed numerically.
    Lp(String),
    /// An algorithm detected that its input violates an assumed property
    /// (for example a descent that does not terminate within its guard).
    Diagnostic(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptyDecomposition => f.write_str("level-set decomposition of x = y is empty"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Rejected(msg) => write!(f, "rejected: {msg}"),
            Error::ResourceLimit { requested, limit } => {
                write!(f, "enumeration of {requested} items exceeds the limit of {limit}")
            }
            Error::NotInDomain => f.write_str("point is outside the effective domain"),
            Error::Lp(msg) => write!(f, "envelope LP failed: {msg}"),
            Error::Diagnostic(msg) => write!(f, "diagnostic: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
