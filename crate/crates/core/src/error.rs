use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: NodeId },

    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: NodeId, v: NodeId },

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("neighborhood of node {node} too large for exact independence ({size} nodes, search budget {budget})")]
    IndependenceTooLarge {
        node: NodeId,
        size: usize,
        budget: u64,
    },

    #[error("bandwidth violation by node {node} in round {round}: {bytes} bytes exceeds limit of {limit} bytes")]
    Bandwidth {
        node: NodeId,
        round: usize,
        bytes: usize,
        limit: usize,
    },

    #[error("run did not terminate within {0} rounds")]
    Timeout(usize),

    #[error("protocol error by node {node} in round {round}: {message}")]
    Protocol {
        node: NodeId,
        round: usize,
        message: String,
    },

    #[error("isolated nodes: {0:?}")]
    IsolatedNodes(Vec<NodeId>),

    #[error("invalid placement: {0}")]
    InvalidPlacement(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Param(msg.into())
}
