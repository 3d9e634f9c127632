use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("singular system: coefficient matrix has zero determinant")]
    Singular,

    #[error("expected {expected} points, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("points {0} and {1} share an x-coordinate")]
    DuplicateX(usize, usize),

    #[error("x-coordinates must be strictly increasing (violated at index {0})")]
    NotIncreasing(usize),

    /// A tuple whose divided difference vanishes where a strict sign is required.
    #[error("degenerate tuple {0:?}: points lie on a polynomial of too low degree")]
    Degenerate(Vec<usize>),

    #[error("index {index} out of range for ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("indices must be strictly increasing: {0:?}")]
    UnsortedIndices(Vec<usize>),

    #[error("invalid color {0}; colors are 1 or 2")]
    InvalidColor(u8),

    #[error("{what}: size {size} exceeds cap {cap}")]
    SizeCap { what: &'static str, size: u128, cap: u128 },

    #[error("value needs more than {max_bits} bits")]
    Overflow { max_bits: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("result is not homogeneous: {0:?}")]
    NotHomogeneous(Vec<usize>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
