use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("odd vertex count {0}")]
    OddVertexCount(usize),
    #[error("vertex count must be positive")]
    EmptyGraph,
    #[error("vertex index {index} out of range for graph with {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self loop on vertex {0}")]
    SelfLoop(usize),
    #[error("invalid weight {weight} on edge ({i}, {j}): weights must be finite and non-negative")]
    InvalidWeight { i: usize, j: usize, weight: f64 },
    #[error("contradictory duplicate entries for edge ({i}, {j}): {first} vs {second}")]
    ContradictoryEdge {
        i: usize,
        j: usize,
        first: f64,
        second: f64,
    },
    #[error("edge ({i}, {j}) lies inside one half of a bipartite graph")]
    NotCrossEdge { i: usize, j: usize },
    #[error("vertex {0} appears in more than one pair")]
    VertexReused(usize),
    #[error("incomplete matching: covers {covered} of {n} vertices")]
    IncompleteMatching { covered: usize, n: usize },
    #[error("matching refers to {matching_n} vertices but graph has {graph_n}")]
    SizeMismatch { matching_n: usize, graph_n: usize },
    #[error("instance too large for oracle: n = {0} exceeds 16")]
    OracleTooLarge(usize),
    #[error("hungarian requires bipartition")]
    NotBipartite,
    #[error("no perfect matching exists on the admissible edges")]
    NoPerfectMatching,
    #[error("dual certificate check failed: {0}")]
    Certification(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("divergence: training loss became non-finite at epoch {epoch}")]
    Divergence { epoch: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
