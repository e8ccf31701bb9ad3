use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("n = {n} is outside the supported range 1..={max}")]
    OutOfBounds { n: u64, max: u64 },

    #[error("unknown manifold `{0}`")]
    UnknownManifold(String),

    #[error("manifold model does not match the schema: {0}")]
    ModelSchema(String),

    #[error("manifold model violates an invariant: {0}")]
    ModelInvariant(String),

    #[error("coordinate mismatch: {0}")]
    CoordinateMismatch(String),

    #[error("inconsistent bundle sector: {0}")]
    InconsistentSector(String),

    #[error("cannot decide the quadratic condition {0}")]
    Undecided(String),
}

pub type Result<T> = std::result::Result<T, Error>;
