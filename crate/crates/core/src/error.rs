use thiserror::Error;

use crate::geom::VertexId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: VertexId, second: VertexId },

    #[error("degenerate ray: the two points coincide")]
    Coincident,

    #[error("vertex {0} is out of range")]
    NoSuchVertex(VertexId),

    #[error("invalid wedge at {apex}: {reason}")]
    InvalidWedge { apex: VertexId, reason: &'static str },

    #[error("distributed simulation made no progress in round {round}: {detail}")]
    Livelock { round: usize, detail: String },

    #[error("commit of {edge:?} at vertex {vertex} hit an occupied cone")]
    CommitConflict { vertex: VertexId, edge: (VertexId, VertexId) },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
