use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// The split between [`Error::Hypothesis`] and [`Error::Assertion`] matters to
/// callers: the first means the inputs fall outside a theorem's stated range,
/// the second means an identity that should hold on valid inputs did not.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field of order {p}^{m} exceeds 2^16 elements")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("element rep {rep} out of range for a field of order {order}")]
    ElementOutOfRange { rep: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{k} is not a power of the characteristic {p}")]
    NotCharacteristicPower { k: u64, p: u32 },
    #[error("field order {0} is not a square")]
    NonSquareOrder(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subcode check failed: {0}")]
    NotSubcode(String),
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),
    #[error("evaluation at a pole of the function at {0}")]
    Pole(String),
    #[error("local expansion is not available at {0}")]
    Ramified(String),
    #[error("evaluation divisor is not the canonical one for this curve: {0}")]
    NonstandardDivisor(String),
    #[error("invalid evaluation places: {0}")]
    InvalidPlaces(String),
    #[error("hypothesis violated ({theorem}): {constraint}")]
    Hypothesis {
        theorem: &'static str,
        constraint: String,
    },
    #[error("internal assertion failed: {0}")]
    Assertion(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn hypothesis(theorem: &'static str, constraint: impl Into<String>) -> Error {
    Error::Hypothesis {
        theorem,
        constraint: constraint.into(),
    }
}
