use thiserror::Error;

use crate::factor::Factorization;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("factorization incomplete (unfactored cofactor {})", .0.cofactor)]
    FactorizationIncomplete(Factorization),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular curve (discriminant is zero)")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("tuple entries must be nonzero")]
    ZeroEntry,
    #[error("not a Diophantine tuple: {0}")]
    NotDiophantine(String),
    #[error("degenerate triple (repeated entry)")]
    DegenerateTriple,
    #[error("ab+1 is not a square")]
    NotDiophantinePair,
    #[error("extension value is zero")]
    ZeroExtension,
    #[error("sum is the point at infinity")]
    InfiniteSum,
    #[error("curve is not in root form y^2 = (x-e1)(x-e2)(x-e3)")]
    FormMismatch,
    #[error("point is not in 2E(Q)")]
    NotHalvable,
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("condition failed: {0}")]
    ConditionFailed(String),
    #[error("dataset corrupt: {0}")]
    DatasetCorrupt(String),
}

pub type Result<T> = std::result::Result<T, Error>;
