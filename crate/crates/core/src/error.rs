use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("vertex set must be nonempty")]
    EmptySet,

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("instance of size {size} exceeds the exhaustive-search cap of {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("search budget of {budget} exhausted before an answer was found")]
    BudgetExceeded { budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hyperedge {0} is empty and can never be hit")]
    EmptyHyperedge(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
