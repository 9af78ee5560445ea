use std::fmt;

use num_bigint::BigInt;

/// Errors raised by the exact-arithmetic layer and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("precision exhausted: interval still ambiguous at {budget} bits")]
    PrecisionExhausted { budget: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible surds: sqrt({left}) and sqrt({right})")]
    IncompatibleSurds { left: BigInt, right: BigInt },
    #[error("radicand {0} is too large to normalize")]
    RadicandTooLarge(BigInt),
    #[error("{t0} and {s0} are not coprime")]
    NotCoprime { t0: BigInt, s0: BigInt },
    #[error("partial quotient {a}/{b} is not proper (need b >= a >= 1)")]
    NotProper { a: BigInt, b: BigInt },
    #[error("1 - x is undetermined when a1 < b1 < 2*a1 (a1 = {a1}, b1 = {b1})")]
    MiddleCase { a1: BigInt, b1: BigInt },
    #[error("1 - x formula yields an improper quotient: b1 * x2 >= 1")]
    ImproperResult,
    #[error("zero coordinate (x = 0: {x_zero}, y = 0: {y_zero})")]
    ZeroCoordinate { x_zero: bool, y_zero: bool },
    #[error("point lies on a cylinder boundary")]
    OnBoundary,
    #[error("search bound {bound} too small to decide")]
    BoundTooSmall { bound: BigInt },
    #[error("precondition violated: {0}")]
    Domain(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid expansion json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A parse failure with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}
