//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classification used by the command-line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: bad field parameters, mixed operands, unparsable files, bad queries.
    Usage,
    /// A geometric precondition does not hold.
    Domain,
    /// A search would exceed (or did exceed) its node budget.
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field exponent must be at least 1, got {0}")]
    InvalidExponent(u32),

    #[error("field order {p}^{e} exceeds the cap of 65536")]
    FieldTooLarge { p: u64, e: u32 },

    #[error("element index {index} is out of range for GF({q})")]
    ElementOutOfRange { index: u32, q: u32 },

    #[error("operands belong to different fields (GF({left}) and GF({right}))")]
    MixedFields { left: u32, right: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("plane order {0} exceeds the supported maximum of 16")]
    PlaneTooLarge(u32),

    #[error("point id {0} does not exist in this plane")]
    NoSuchPoint(usize),

    #[error("line id {0} does not exist in this plane")]
    NoSuchLine(usize),

    #[error("a line through a single point is undefined (point {0} given twice)")]
    SamePoint(usize),

    #[error("the meet of a line with itself is undefined (line {0} given twice)")]
    SameLine(usize),

    /// A named geometric precondition failed.
    #[error("precondition violated: {0}")]
    Domain(String),

    #[error("search budget of {budget} nodes exceeded (needed at least {needed})")]
    BudgetExceeded { budget: u64, needed: u64 },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("malformed point-set file: {0}")]
    Format(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotPrime(_)
            | Error::InvalidExponent(_)
            | Error::FieldTooLarge { .. }
            | Error::ElementOutOfRange { .. }
            | Error::MixedFields { .. }
            | Error::PlaneTooLarge(_)
            | Error::NoSuchPoint(_)
            | Error::NoSuchLine(_)
            | Error::InvalidQuery(_)
            | Error::Format(_)
            | Error::Io(_) => ErrorKind::Usage,
            Error::ZeroInverse | Error::SamePoint(_) | Error::SameLine(_) | Error::Domain(_) => {
                ErrorKind::Domain
            }
            Error::BudgetExceeded { .. } => ErrorKind::Budget,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
