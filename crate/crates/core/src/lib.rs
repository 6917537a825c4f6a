//! Exact symbolic summation of hypergeometric terms.
//!
//! The crate is layered bottom-up: [`arith`] supplies exact scalars,
//! multivariate polynomials and rational functions; [`termdsl`] describes
//! summands; [`gosper`] and [`zeilberger`] compute antidifferences and
//! recurrences; [`factorshop`] turns first-order recurrences into
//! hypergeometric terms; [`oracle`] checks results by brute force.

pub mod arith;
pub mod factorshop;
pub mod gosper;
pub mod oracle;
pub mod termdsl;
pub mod zeilberger;

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("term not hypergeometric in {var}: {detail}")]
    NotHypergeometric { var: String, detail: String },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("expression is not affine: {0}")]
    NonAffine(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("incompatible quadratic extensions sqrt({left}) and sqrt({right})")]
    ExtensionMismatch { left: BigInt, right: BigInt },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot evaluate {factor}: {reason}")]
    Eval { factor: String, reason: String },
    #[error("no recurrence of order <= {0} found")]
    NoRecurrence(usize),
    #[error("expected a first-order recurrence, got order {0}")]
    OrderMismatch(usize),
    #[error("cannot represent as a hypergeometric term: residual {0} unfactored")]
    CannotRepresent(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
