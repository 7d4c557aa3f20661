//! Custom entity/pattern embeddings trained on skip-gram + attract + repel.

mod math;
mod negative;
mod objective;
mod table;
mod train;

pub use math::{cosine, dot, log_sigmoid, sigmoid};
pub use negative::{sample_negative_patterns, NegativeSampler};
pub use objective::{objective, objective_gradient, NegativeAssignment};
pub use table::{EmbeddingTable, Item};
pub use train::{train_inner, TrainConfig};
