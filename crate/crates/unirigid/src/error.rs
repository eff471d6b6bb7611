use thiserror::Error;

/// Unified error type for all fallible operations in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input matrix or coordinate data contains NaN or infinity.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Graph structure violates an invariant (loop, duplicate member, bad index).
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// Configuration violates an invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    /// Dimensions of two operands do not agree.
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    /// Matrix expected to be symmetric deviates beyond tolerance.
    #[error("matrix not symmetric: max deviation {0:.3e}")]
    NotSymmetric(f64),

    /// Tolerance policy with a non-positive entry.
    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    /// Stress vector refers to a pair that is not a member of the graph.
    #[error("invalid stress: {0}")]
    InvalidStress(String),

    /// A user-supplied stress failed validation during the reduction.
    #[error("stress rejected: {0}")]
    StressRejected(String),

    /// A vertex lies on the exceptional hyperplane of a projective map.
    #[error("vertex {0} lies on the exceptional hyperplane of the projective map")]
    VertexOnHyperplane(usize),

    /// Projective map matrix is singular or has the wrong shape.
    #[error("invalid projective map: {0}")]
    InvalidProjectiveMap(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// File content is syntactically valid but violates the schema.
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
