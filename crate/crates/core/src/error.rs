use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("cycle is not a face of the given subgraph")]
    NotAFace,

    #[error("terminals are disconnected: {0}")]
    Disconnected(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("too many terminals for exact Steiner solver: {found} > {cap}")]
    TerminalCap { found: usize, cap: usize },

    #[error("no branch decomposition of width <= {cap} found (best {found})")]
    WidthCap { found: usize, cap: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("instance too large: {0}")]
    SizeCap(String),

    #[error("slicing invariant violated: {0}")]
    Slicing(String),

    #[error("recombined solution infeasible for terminals {u} and {v}: need {need}, have {have}")]
    Recombine { u: usize, v: usize, need: u32, have: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
