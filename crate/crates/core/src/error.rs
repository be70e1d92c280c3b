use crate::graph::{DefectReport, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge {
        u: VertexId,
        v: VertexId,
        reason: &'static str,
    },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("label for vertex {vertex} is not finite")]
    NonFiniteLabel { vertex: VertexId },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("vertex {vertex} is free where a value is required")]
    MissingValue { vertex: VertexId },

    #[error("instance is not well-posed: {0}")]
    NotWellPosed(DefectReport),

    #[error("operation requires an undirected graph")]
    RequiresUndirected,

    #[error("operation requires a directed graph")]
    RequiresDirected,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a terminal path: {0}")]
    NotATerminalPath(String),

    #[error("no terminal path passes through vertex {vertex}")]
    NoTerminalPath { vertex: VertexId },

    #[error("graph has an edge between terminals {u} and {v}")]
    TerminalEdge { u: VertexId, v: VertexId },

    #[error("every vertex is already a terminal")]
    NoFreeVertex,

    #[error("input has a directed cycle through vertex {vertex}")]
    NotAcyclic { vertex: usize },

    #[error("input is not transitively closed: missing arc ({u}, {v})")]
    NotTransitivelyClosed { u: usize, v: usize },

    #[error("terminal sets differ at vertex {vertex}")]
    TerminalSetMismatch { vertex: VertexId },

    #[error("{what} size {size} exceeds the limit of {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}
