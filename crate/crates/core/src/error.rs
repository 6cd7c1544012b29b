use thiserror::Error;

/// Errors raised by the bound engines, enumerators and file loaders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed file: {0}")]
    Parse(String),

    #[error("generator matrix is rank deficient: rank {rank} < k = {k}")]
    RankDeficient { rank: usize, k: usize },

    #[error("{what} = {value} exceeds the enumeration limit {limit}")]
    SizeGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse error classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numeric,
    SizeGuard,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) | Error::Parse(_) | Error::RankDeficient { .. } | Error::Io(_) => {
                ErrorClass::Config
            }
            Error::Divergent(_) | Error::Numeric(_) => ErrorClass::Numeric,
            Error::SizeGuard { .. } => ErrorClass::SizeGuard,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
