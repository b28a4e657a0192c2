use thiserror::Error;

/// Errors raised by the algebraic and categorical layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),
    #[error("object `{0}` is not orientable and needs a Thom shift over Z")]
    OrientationRequired(String),
    #[error("subset is not downward closed: correspondence {from} -> {to} leaves it")]
    NotDownwardClosed { from: String, to: String },
    #[error("chain map condition fails: {0}")]
    ChainMapViolation(String),
    #[error("differential squares to a nonzero map: {0}")]
    DifferentialSquaredNonzero(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("cutoff {cutoff} is beyond the stability range (at most {max})")]
    CutoffBeyondStabilityRange { cutoff: i64, max: i64 },
    #[error("{0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
