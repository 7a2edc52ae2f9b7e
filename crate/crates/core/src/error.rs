use thiserror::Error;

/// Errors raised by geometry construction, subdivision and mesh I/O.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate simplex: vertices are affinely dependent")]
    Degenerate,

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid sign vector {0:?}")]
    InvalidSignVector(Vec<u8>),

    #[error("invalid child key: {0}")]
    InvalidKey(String),

    #[error("vertex id {id} out of range (table has {len} vertices)")]
    VertexOutOfRange { id: usize, len: usize },

    #[error("duplicate points: vertices {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },

    #[error("invalid cell {cell}: {reason}")]
    InvalidCell { cell: usize, reason: String },

    #[error("degenerate cell {0}")]
    DegenerateCell(usize),

    #[error("non-complex intersection between cells {first} and {second}")]
    NonComplexIntersection { first: usize, second: usize },

    #[error("unsupported dimension {dim} for {format} export")]
    UnsupportedDimension { format: &'static str, dim: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
