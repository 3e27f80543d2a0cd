use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("not a subgraph of the host: {0}")]
    NotSubgraph(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("terminals are not connected")]
    Disconnected,
    #[error("subgraph is geodesic; no violating terminal set to extract from")]
    NoViolation,
    #[error("invalid shortcut tree instance: {0}")]
    InvalidInstance(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

impl Error {
    /// Errors that stem from malformed user input rather than from a
    /// property of a well-formed instance.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::NoViolation)
    }
}
