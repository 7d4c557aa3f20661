use thiserror::Error;

/// Errors raised anywhere in the emboot pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid mention: {0}")]
    InvalidMention(String),

    #[error("seed entity {0:?} does not occur in the corpus")]
    UnknownSeed(String),

    #[error("seed entity {surface:?} is listed under both {first} and {second}")]
    DuplicateSeed {
        surface: String,
        first: String,
        second: String,
    },

    #[error("no categories given")]
    NoCategories,

    #[error("at least two categories are required, got {0}")]
    TooFewCategories(usize),

    #[error("category {0} has an empty entity pool")]
    EmptyPool(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("training diverged: non-finite embedding at inner epoch {epoch}, step {step}")]
    NonFinite { epoch: usize, step: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("entity {0:?} has no gold label")]
    MissingGold(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
