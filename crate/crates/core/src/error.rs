use thiserror::Error;

use crate::expr::Expr;

/// Failures of the scalar expression layer.
#[derive(Debug, Clone, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("invalid coordinate space: {0}")]
    InvalidVarSpace(String),
    #[error("domain error evaluating `{node}`: {reason}")]
    Domain { node: Expr, reason: &'static str },
    #[error("point has {got} coordinates, expected {expected}")]
    PointArity { expected: usize, got: usize },
    #[error("non-finite coordinate value at index {0}")]
    NonFinite(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parent mismatch: objects of rank {left} and {right} combined")]
    ParentMismatch { left: usize, right: usize },
    #[error("degree error: {0}")]
    Degree(String),
    #[error("Nijenhuis torsion does not vanish (residual {residual:e} on frame pair ({i}, {j}))")]
    Torsion { residual: f64, i: usize, j: usize },
    #[error("NP is not skew-symmetric (residual {residual:e})")]
    NotSkew { residual: f64 },
    #[error("{what} fails (residual {residual:e})")]
    Identity { what: String, residual: f64 },
    #[error("top coefficient vanishes at a sample point (|value| = {value:e})")]
    VanishingTop { value: f64 },
    #[error("endomorphism is singular at a sample point (|det| = {det:e})")]
    Singular { det: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("in `{field}`: {source}")]
    Field { field: String, source: ExprError },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
