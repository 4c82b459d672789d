use crate::hypergraph::{ValidationReport, VertexId};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance:\n{0}")]
    InvalidInstance(ValidationReport),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("vertex {0} is not in the last part")]
    NotLastPart(VertexId),

    #[error("vertices in part {0} (the last part) are never sampled")]
    LastPartSampled(u32),

    #[error("list for {vertex} has {len} colors, need at least {q}")]
    InsufficientList { vertex: VertexId, len: usize, q: u32 },

    #[error("lists are not normalized to a common size of {q}")]
    NotNormalized { q: u32 },

    #[error("list size must be at least {min} (got {got})")]
    ListSizeTooSmall { got: u32, min: u32 },

    #[error("color {0} is not in the list")]
    ColorNotInList(u32),

    #[error("invalid color list: {0}")]
    InvalidColorList(String),

    #[error("edge member {0} is uncolored")]
    UncoloredMember(VertexId),

    #[error("target degree {target} is below the maximum degree {delta}")]
    TargetDegreeTooSmall { target: usize, delta: usize },

    #[error("degree regularization did not converge")]
    EmbeddingStuck,

    #[error("maximum degree must exceed 1 in threshold formulas (got {0})")]
    DegreeTooSmall(f64),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("fixed point iteration did not converge after {0} iterations")]
    NonConvergent(u32),

    #[error("empty focus set for {vertex}: gamma*q below one color")]
    EmptyFocusSet { vertex: VertexId },

    #[error("search space too large: {0}")]
    SearchGuardExceeded(String),

    #[error("instance/style mismatch: {0}")]
    StyleMismatch(String),

    #[error("edges at {0} do not form disjoint single-color channels")]
    NotChannelStar(VertexId),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
