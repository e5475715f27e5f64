use thiserror::Error;

/// Errors raised by field construction, matrix I/O, code operations and scans.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p not prime: {0}")]
    NotPrime(u32),
    #[error("field exponent must be at least 1, got {0}")]
    BadExponent(u32),
    #[error("field order {0} exceeds the supported maximum of 256")]
    OrderTooLarge(u64),
    #[error("modulus is invalid: {0}")]
    BadModulus(String),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("element {value} is out of range for a field of order {q}")]
    ElementOutOfRange { value: u32, q: u32 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("work limit exceeded: {needed} codeword evaluations requested, budget is {budget}")]
    WorkLimit { needed: u128, budget: u64 },
    #[error("minimum weight of the zero code is undefined")]
    ZeroCode,
    #[error("not a strict subcode")]
    NotStrictSubcode,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("resource ceiling exceeded: {0}")]
    ResourceCeiling(String),
    #[error("x must lie in (0, 2), got {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
