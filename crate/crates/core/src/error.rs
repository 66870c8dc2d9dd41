use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node count {0} out of range (1..={max})", max = crate::graph::MAX_NODES)]
    NodeCount(usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({}, {})", .0.0, .0.1)]
    DuplicateEdge(Edge),
    #[error("edge ({}, {}) has an endpoint outside 0..{n}", .edge.0, .edge.1)]
    EndpointOutOfRange { edge: Edge, n: usize },
    #[error("edge ({}, {}) is not in the network", .0.0, .0.1)]
    AbsentEdge(Edge),
    #[error("degree profiles have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("{what}: {actual} exceeds the limit of {limit}")]
    ResourceLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("favor-cost multiple must be at least 2, got {0}")]
    InvalidMultiple(usize),
    #[error("cognitive complexity is only defined for TC networks")]
    NotTc,
    #[error("invalid model parameters: {0}")]
    Parameter(String),
    #[error("unknown network {name:?}; valid names: {}", .valid.join(", "))]
    UnknownNetwork { name: String, valid: Vec<String> },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid game configuration: {0}")]
    Config(String),
    #[error("game is already over")]
    GameOver,
    #[error("game is not over yet")]
    GameNotOver,
    #[error("it is node {expected}'s turn, not node {got}'s")]
    OutOfTurn { expected: usize, got: usize },
    #[error("node {player} cannot delete ({}, {}): not an incident link of the current network", .edge.0, .edge.1)]
    InvalidDecision { player: usize, edge: Edge },
    #[error("invalid agent spec {spec:?}: {reason}")]
    AgentSpec { spec: String, reason: String },
    #[error("scripted agent ran out of decisions")]
    ScriptExhausted,
    #[error("ratio undefined: no decisions")]
    EmptyRatio,
    #[error("invalid batch: {0}")]
    Batch(String),
    #[error("game did not terminate within {0} turns")]
    NoTermination(usize),
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("not your turn")]
    NotYourTurn,
    #[error("decision deadline passed; a keep was applied automatically")]
    DeadlineExpired,
    #[error("invalid human node {node} for a network of {n} nodes")]
    InvalidHumanNode { node: usize, n: usize },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
