use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} cap exceeded: limit {cap}, got {got}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        got: usize,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("target graph has no nodes")]
    EmptyTarget,

    #[error("incompatible label arity: {left} vs {right}")]
    IncompatibleArity { left: usize, right: usize },

    #[error("graph with {nodes} nodes is outside the parameter table (cap {cap})")]
    OutOfTable { nodes: usize, cap: usize },

    #[error("parameter is not a valid model source: {0}")]
    ModelPrecondition(String),

    #[error("negative Möbius value {value} at class {witness}")]
    NegativeMobius { witness: String, value: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
