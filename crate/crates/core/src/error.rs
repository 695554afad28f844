use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("modulus must have positive degree")]
    ConstantModulus,
    #[error("element is not invertible: gcd with modulus is {gcd}")]
    NotInvertible { gcd: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("matrix is not of full column rank ({rank} < {cols})")]
    NotUniquelySolvable { rank: usize, cols: usize },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("too many erasures: {erased} columns lost, at most {r} recoverable")]
    TooManyErasures { erased: usize, r: usize },
    #[error("exhaustive verification needs {needed} patterns, limit is {limit}")]
    EnumerationTooLarge { needed: u128, limit: u128 },
    #[error("operation not supported for this code: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
