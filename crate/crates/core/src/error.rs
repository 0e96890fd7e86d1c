//! Error type shared across the workbench.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid deformation parameter: {0}")]
    QParam(String),

    #[error("syntax error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("rule does not decrease the monomial order: {0}")]
    NonTerminatingRule(String),

    #[error("local confluence failure: {0}")]
    Confluence(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("negative power of non-invertible generator `{0}`")]
    NotInvertible(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("truncated basis would exceed cap {cap} (got {size}); lower the truncation bound")]
    BasisCap { cap: usize, size: usize },

    #[error("bases are not composable: {0}")]
    NonComposable(String),

    #[error("matrix is not square-zero on the truncation: {0}")]
    NotAComplex(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("linear solve failed: {0}")]
    Solve(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
