use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("limit diverges")]
    LimitDiverges,
    #[error("substitution pole")]
    SubstitutionPole,
    #[error("sqrt not allowed in exact mode")]
    SqrtInExactMode,
    #[error("{0} is not a rational square")]
    NotASquare(String),
    #[error("t is reserved")]
    TReserved,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not invertible")]
    NotInvertible,
    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("duplicate algebra {0:?}")]
    DuplicateAlgebra(String),
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("certificate {name} rejected: {rejection}")]
    CertificateRejected { name: String, rejection: String },
    #[error("sampling failed: {0}")]
    SamplingFailed(String),
    #[error("degeneration graph inconsistent: {0}")]
    GraphInconsistent(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
