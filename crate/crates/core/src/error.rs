use thiserror::Error;

use crate::expr::ExprError;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("problem validation failed:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),

    #[error("boundary closure is singular: {what} denominator is zero")]
    SingularClosure { what: &'static str },

    #[error("matrix is singular to working precision at column {column}")]
    SingularMatrix { column: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("right-hand side f{equation} failed at x = {x}: {source}")]
    RhsEvaluation {
        equation: u8,
        x: f64,
        #[source]
        source: ExprError,
    },

    #[error("non-finite residual at x = {x} in equation {equation}")]
    NonFinite { equation: u8, x: f64 },

    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("config error: {0}")]
    Config(String),
}
