use std::io;

/// Errors produced by graph construction, attacks, solvers and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("vertex count mismatch: expected {expected}, found {found}")]
    VertexCountMismatch { expected: usize, found: usize },

    #[error("edge {0}-{1} of the removed graph is not an edge of the host graph")]
    EdgeNotInHost(usize, usize),

    #[error("vertex set must be nonempty")]
    EmptySet,

    #[error("vertex sets overlap at vertex {0}")]
    OverlappingSets(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction infeasible: {reason} (short by {deficit} vertices)")]
    Infeasible { reason: String, deficit: usize },

    #[error("invalid rotation: {0}")]
    InvalidRotation(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("vertex {0} was not discovered by the rotation closure")]
    UndiscoveredEndpoint(usize),

    #[error("{what} is limited to n <= {limit}, got n = {n}")]
    TooLarge { what: &'static str, n: usize, limit: usize },

    #[error("matching is not maximum: an augmenting path exists")]
    NotMaximum,

    #[error("a longest-path certification is required for this check")]
    MissingCertification,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
