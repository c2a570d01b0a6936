use thiserror::Error;

use crate::qseries::CoefficientRing;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} out of range (need 2 <= m < 2^32)")]
    InvalidModulus(u64),

    #[error("truncation order must be at least 1")]
    EmptyOrder,

    #[error("duplicate exponent {0}")]
    DuplicateExponent(usize),

    #[error("exponent {exponent} outside truncation order {order}")]
    ExponentOutOfRange { exponent: usize, order: usize },

    #[error("coefficient ring mismatch: {left} vs {right}")]
    RingMismatch {
        left: CoefficientRing,
        right: CoefficientRing,
    },

    #[error("constant term {constant} is not a unit (gcd witness {gcd})")]
    NonUnitConstant { constant: String, gcd: String },

    #[error("operation requires an exact-integer series, got {0}")]
    ExpectedExact(CoefficientRing),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("table too short: need length {required}, have {available}")]
    TableTooShort { required: usize, available: usize },

    #[error("table ring {table} cannot answer residues modulo {modulus}")]
    IncompatibleModulus {
        table: CoefficientRing,
        modulus: u64,
    },

    #[error("enumeration is capped at order {cap}, requested {requested}")]
    EnumerationCap { cap: usize, requested: usize },

    #[error("malformed series data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
