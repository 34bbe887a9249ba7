use thiserror::Error;

use crate::graph::VertexId;

/// Everything that can go wrong across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("edge {edge} is a self-loop")]
    SelfLoop { edge: usize },
    #[error("edge {edge} has a negative or non-finite length ({length})")]
    NegativeLength { edge: usize, length: f64 },
    #[error("malformed rotation at vertex {vertex}: {reason}")]
    MalformedRotation { vertex: VertexId, reason: String },
    #[error("rotation system is not a planar embedding: {0}")]
    NonPlanarEmbedding(String),
    #[error("face containing dart {0} cannot be triangulated")]
    Untriangulable(usize),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has no marked vertices")]
    NoMarkedVertices,
    #[error("vertex {0} is not reached from the source")]
    Unreached(VertexId),
    #[error("separator root {0} is not marked")]
    RootUnmarked(VertexId),
    #[error("no non-tree edge yields a balanced cycle separator")]
    NoBalancedEdge,
    #[error("path is empty")]
    EmptyPath,
    #[error("vertex at path index {0} lies outside the portal prefix")]
    OutsidePrefix(usize),
    #[error("portal set is empty")]
    NoPortals,
    #[error("tripartite instance has zero scale")]
    ZeroScale,
    #[error("one side of the instance is empty")]
    EmptySide,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("epsilon must lie in (0, 0.7], got {0}")]
    BadEpsilon(f64),
    #[error("contracted group of vertex {0} is not connected")]
    DisconnectedGroup(VertexId),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
