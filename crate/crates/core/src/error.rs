use thiserror::Error;

/// Which of the two point sets an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The inner (source) set, clustered around the origin.
    Inner,
    /// The outer (target) set, inside the annulus.
    Outer,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Inner => f.write_str("X"),
            Side::Outer => f.write_str("Y"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("coincident points: {0}")]
    Singular(String),

    #[error("coincident points at row {row}, column {col}")]
    Coincident { row: usize, col: usize },

    #[error("g has a pole at z = 1")]
    Pole,

    #[error("separation violated in {side} at index {index}: {violation}")]
    Separation {
        side: Side,
        index: usize,
        violation: String,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("point set '{0}' is empty")]
    EmptySet(String),

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("N = {n} is too small: {detail}")]
    NTooSmall { n: usize, detail: String },

    #[error("tolerance {tau:e} not reached for any N up to {cap}")]
    Unreachable { tau: f64, cap: usize },

    #[error("kernel order d = {d} exceeds the supported maximum {max}")]
    UnsupportedOrder { d: u32, max: u32 },

    #[error("instance too large for dense evaluation: {rows} x {cols}")]
    TooLarge { rows: usize, cols: usize },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
