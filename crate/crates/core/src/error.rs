use thiserror::Error;

/// Errors raised by body construction, solvers, quadrature and checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("constructor error: {0}")]
    Constructor(String),

    #[error("singular linear map: {0}")]
    Singular(String),

    #[error("invalid Orlicz function: {0}")]
    InvalidFunction(String),

    #[error("bracket expansion diverged after {doublings} doublings: {context}")]
    Divergence { doublings: usize, context: String },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("evaluation error at node {node}: {message}")]
    Evaluation { node: usize, message: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
