use thiserror::Error;

use crate::cohft::OracleKey;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not symmetric")]
    NonSymmetric,

    #[error("singular: {0}")]
    Singular(String),

    #[error("not a total x-derivative (remainder {remainder})")]
    NotExact { remainder: String },

    #[error("series has a nonzero arity-1 block")]
    HasLinearBlock,

    #[error("missing oracle data for {} key(s): {}", keys.len(), format_keys(keys))]
    MissingOracleData { keys: Vec<OracleKey> },

    #[error("oracle returned invalid data at {key}: {reason}")]
    OracleViolation { key: OracleKey, reason: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("validation failed at {key}: {reason}")]
    Validation { key: String, reason: String },

    #[error("Miura map component {color} is not u + O(h)")]
    NonUnitLeading { color: usize },

    #[error("coefficient is not real: {0}")]
    NotReal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("x-degree cap {0} exceeded")]
    DegreeCap(u32),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_keys(keys: &[OracleKey]) -> String {
    keys.iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
