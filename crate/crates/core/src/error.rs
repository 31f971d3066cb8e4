//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Structural problems detected while building a graph.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A node sequence that is not a path in the graph.
    #[error("invalid arc: {0}")]
    InvalidArc(String),

    /// Parameter outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Operation needs a nonempty frontier as boundary proxy.
    #[error("no boundary proxy: the graph has an empty frontier")]
    EmptyFrontier,

    /// A hypothesis gate failed hard (e.g. the boundary metric requires
    /// epsilon < min(1, 1/(5*delta))).
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// A scan was refused because the input exceeds the configured size
    /// gate and no override was given.
    #[error("size limit: {0}")]
    SizeLimit(String),

    /// A road invariant did not hold when it was relied upon.
    #[error("road invariant violated: {0}")]
    RoadViolation(String),

    /// Malformed graph or config file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
