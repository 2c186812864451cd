use thiserror::Error;

use crate::socp::SolverStatus;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("duplicate exponent {0}")]
    DuplicateExponent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point is not strictly inside the segment")]
    NotOnSegment,

    #[error("trellis is not affinely independent")]
    DegenerateTrellis,

    #[error("point {0} is not in the relative interior of the trellis")]
    NotInterior(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("search budget exceeded")]
    BudgetExceeded,

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("exponent {0} lies outside the Newton polytope of the positive even terms")]
    CoverInfeasible(String),

    #[error("support point {0} is not covered by any circuit")]
    UncoveredSupport(String),

    #[error("passthrough term {0} has a negative coefficient")]
    NegativePassthrough(String),

    #[error("solver failed: {0}")]
    Solver(SolverStatus),

    #[error("not strictly certifiable at this precision: {0}")]
    NotStrictlyCertifiable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
