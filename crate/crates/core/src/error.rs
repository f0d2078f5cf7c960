use thiserror::Error;

/// Errors raised by the belief computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("an evidence graph needs at least one vertex")]
    EmptyGraph,

    #[error("{n} vertices exceed the supported maximum of {max}")]
    TooManyVertices { n: usize, max: usize },

    #[error("vertex {index} out of range for a graph with {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("edge ({from}, {to}) must satisfy from < to < {n}")]
    InvalidEdge { from: usize, to: usize, n: usize },

    #[error("{what} = {value} lies outside [0, 1]")]
    OutOfUnitRange { what: String, value: f64 },

    #[error("expected {expected} edge doubts, got {got}")]
    EdgeCount { expected: usize, got: usize },

    #[error("oracle infeasible: {n} vertices exceed the oracle cap of {cap}")]
    OracleInfeasible { n: usize, cap: usize },

    #[error("full enumeration of {n} vertices exceeds the cap of {cap}; use single-path queries instead")]
    EnumerationCap { n: usize, cap: usize },

    #[error("total conflict: k = 1")]
    TotalConflict,

    #[error("path length mismatch: expected {expected}, got {got}")]
    PathLength { expected: usize, got: usize },

    #[error("invalid path character {0:?}, expected '0' or '1'")]
    PathSyntax(char),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
