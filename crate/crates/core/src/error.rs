use thiserror::Error;

/// Errors produced by the library.
///
/// The variants are grouped so that a front end can map them onto coarse
/// outcome classes (bad input, violated precondition, numerical failure)
/// without matching on message text; see [`Error::class`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("set is unbounded")]
    Unbounded,

    #[error("origin is not an interior point: {0}")]
    OriginNotInterior(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("ill-conditioned matrix (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),

    #[error("no certified power k <= {cap} (best margin {best_margin:.3e})")]
    CapExhausted { cap: usize, best_margin: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Precondition,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_) => ErrorClass::Input,
            Error::DimensionMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::Precondition(_)
            | Error::Unbounded
            | Error::OriginNotInterior(_)
            | Error::Unsupported(_) => ErrorClass::Precondition,
            Error::IllConditioned(_) | Error::NonConvergence(_) | Error::CapExhausted { .. } => {
                ErrorClass::Numerical
            }
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
