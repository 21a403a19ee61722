use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input is well-formed but outside the operation's domain.
    Domain,
    /// A configured work or scale bound would be exceeded.
    Resource,
    /// The request itself is malformed.
    Usage,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("symbol mismatch between codebook and distribution: {0}")]
    SymbolMismatch(String),

    #[error("{x} is not a member of the model set")]
    NotAMember { x: String },

    #[error("malformed code: {0}")]
    MalformedCode(String),

    #[error("input of {0} bytes exceeds the 32-bit length header")]
    InputTooLong(usize),

    #[error("enumeration to {limit} bits needs {candidates} candidates, over the budget of {budget}")]
    WorkBudget {
        limit: usize,
        candidates: u128,
        budget: u64,
    },

    #[error("{0}")]
    Scale(String),

    #[error("no alpha satisfies alpha + h(alpha) <= {bound} bits")]
    NoSufficientStatistic { bound: usize },

    #[error("corrupt program table: {0}")]
    Cache(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::WorkBudget { .. } | Error::Scale(_) => ErrorKind::Resource,
            Error::InvalidArgument(_) | Error::Parse(_) => ErrorKind::Usage,
            _ => ErrorKind::Domain,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::InvalidDistribution(e.to_string())
    }
}
