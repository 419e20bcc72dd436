use thiserror::Error;

/// Errors raised by the enumeration engine and the identity checks.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degenerate form or ring (discriminant zero)")]
    Degenerate,

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),

    #[error("{0} is not a discriminant (must be nonzero and 0 or 1 mod 4)")]
    NotADiscriminant(i64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("{0} is not prime")]
    NotPrime(i64),

    #[error("form is not maximal at {0}")]
    NotMaximal(i64),

    #[error("ring is not Z-mat (some trace is not divisible by 3)")]
    NotZmat,

    #[error("ideal is not invertible")]
    NotInvertible,

    #[error("lattice is not an ideal of the order")]
    NotAnIdeal,

    #[error("sublattice is not a subring: {0}")]
    NotASubring(&'static str),

    #[error("{0} is not cubefree")]
    NotCubefree(i64),

    #[error("character is not primitive")]
    NotPrimitive,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("budget exceeded: {what} {requested} > {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: i64,
        limit: i64,
    },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("no generic trace-zero element found within the search radius")]
    NoGenericElement,
}

pub type Result<T> = std::result::Result<T, Error>;
