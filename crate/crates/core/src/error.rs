use std::path::PathBuf;

/// Errors produced by the quaternion algebra, the decompositions and the solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {op} got {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("complex matrix violates the quaternion block structure (max deviation {deviation:.3e})")]
    Structure { deviation: f64 },

    #[error("decomposition failed: {reason} (reconstruction residual {residual:.3e}, tolerance {tolerance:.3e})")]
    Decomposition {
        reason: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("truncation rank {rank} outside [{min}, {max}]")]
    RankOutOfRange { rank: usize, min: usize, max: usize },

    #[error("rows are not orthonormal (deviation {deviation:.3e} exceeds {tolerance:.1e})")]
    NotOrthonormal { deviation: f64, tolerance: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("observation mask is empty")]
    EmptyMask,

    #[error("invalid mask geometry: {0}")]
    Geometry(String),

    #[error("solver report carries no step history")]
    MissingHistory,

    #[error("unsupported image format: {0}")]
    Format(String),

    #[error("image too small: {rows}x{cols}, need at least {min}x{min}")]
    ImageTooSmall { rows: usize, cols: usize, min: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid synthetic descriptor `{0}`")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
