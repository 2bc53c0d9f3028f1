use thiserror::Error;

use crate::ball::Ball;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("precision must be at least 1")]
    ZeroPrecision,

    #[error("digit {digit} is out of range for p = {p}")]
    InvalidDigit { digit: u32, p: u32 },

    #[error("operation needs index {required} but precision is {precision}")]
    Precision { required: i64, precision: u32 },

    #[error("operands live in different contexts")]
    ContextMismatch,

    #[error("not a covering: {witness} is not covered")]
    NotACovering { witness: Ball },

    #[error("exhaustive check needs {required} evaluations, cap is {cap}")]
    Budget { required: u128, cap: u128 },

    #[error("outside the domain of the map: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
