use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid contraction: {u}{v} is not an edge")]
    InvalidContraction { u: usize, v: usize },

    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("solver did not converge after {iterations} iterations (best feasible value {best})")]
    Convergence { iterations: usize, best: f64 },

    #[error("search space {size} exceeds cap {cap}; {hint}")]
    CapExceeded { size: f64, cap: f64, hint: String },

    #[error("infeasible family spec: pair ({i},{j}) needs {needed} edges but has {capacity} slots")]
    InfeasibleSpec {
        i: usize,
        j: usize,
        needed: u64,
        capacity: u64,
    },

    #[error("parameter regime too small: {0}")]
    RegimeTooSmall(String),

    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("{stage} failed after {attempts} attempts: {diagnostics}")]
    ConstructionFailed {
        stage: String,
        attempts: usize,
        diagnostics: String,
    },

    #[error("sampling failed: {0}")]
    SamplingFailed(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
