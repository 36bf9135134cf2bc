use thiserror::Error;

use crate::exactalg::Q;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("constant term is zero, no inverse in the truncated ring")]
    ZeroConstantTerm,
    #[error("matrix has zero determinant")]
    SingularMatrix,
    #[error("y-degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("{0} does not live over a Hirzebruch surface")]
    NotOverHirzebruch(String),
    #[error("operation not supported for {0}")]
    UnsupportedFamily(String),
    #[error("argument out of range: {0}")]
    RangeViolation(String),
    #[error("transition matrix is not invertible")]
    NotInvertible,
    #[error("determinant is not a unit times a power of y")]
    NonUnitDeterminant,
    #[error("matrix cannot be brought to diagonal form at x = {0}")]
    NotNormalizedAtLambda(Q),
    #[error("jump points outside the rationals remain: {0:?}")]
    UnresolvedJump(Vec<String>),
    #[error("generator not allowed for a = {0}")]
    IllegalGenerator(i64),
    #[error("({0}, {1}, {2}) is not a valid Umemura triple")]
    InvalidUmemura(i64, i64, i64),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("malformed input: {0}")]
    Parse(String),
}
