use thiserror::Error;

/// Errors produced by the qcforge library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("alist parse error at line {line}: {msg}")]
    Alist { line: usize, msg: String },

    #[error("degree distribution undefined: {0}")]
    Degree(String),

    #[error("infeasible degree sequence: {0}")]
    Infeasible(String),

    #[error("enumeration length {requested} exceeds the safety bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },

    #[error("search budget of {0} steps exhausted")]
    BudgetExceeded(u64),

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("shift assignment mismatch: {0}")]
    Assignment(String),

    #[error("base graph has parallel edges; export the expanded code instead")]
    ParallelEdges,

    #[error("invalid spectrum: {0}")]
    Spectrum(String),

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
