use thiserror::Error;

/// Errors raised by the exact geometry kernels and the experiment drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("concentric circles have no radical axis")]
    NoRadicalAxis,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("richness must be at least 2, got {0}")]
    InvalidRichness(usize),
    #[error("brute-force oracle is capped at {cap} circles, scene has {len}")]
    OracleCapExceeded { cap: usize, len: usize },
    #[error("exact selection is capped at {cap} lenses, got {len}")]
    CapExceeded { cap: usize, len: usize },
    #[error("tangent is vertical at the requested point")]
    VerticalTangent,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
