//! Bootstrapped named entity classification with custom embeddings.
//!
//! Starting from a handful of seed entities per category, the bootstrapper
//! alternates between three steps for a fixed number of epochs:
//!
//! 1. train dense embeddings for every entity and every context pattern with a
//!    skip-gram objective plus attract/repel terms supervised by the current
//!    pools ([`embed`]);
//! 2. promote the patterns with the highest PMI for each category
//!    ([`bootstrap::promote_patterns`]);
//! 3. featurize candidate entities, fit a multinomial logistic regression on
//!    the pooled entities and promote the most confident candidates
//!    ([`bootstrap::promote_entities`]).
//!
//! After training, [`interp`] turns the embeddings into a decision list of
//! patterns with per-category probabilities, applied through Noisy-Or. The
//! [`baselines`] module holds the ablation without custom embeddings and a
//! label-propagation baseline, and [`harness`] has the synthetic corpus
//! generator, metrics and file formats used by the command-line tool.

pub mod baselines;
pub mod bootstrap;
pub mod corpus;
pub mod embed;
mod error;
pub mod harness;
pub mod interp;
pub mod pools;

pub use bootstrap::{BootstrapConfig, Outcome, PretrainedVectors, System, Trace};
pub use corpus::{
    CooccurrenceMatrix, Corpus, CorpusStats, CorpusView, EntityId, EntityVocab, Mention, Pattern,
    PatternId, PatternVocab, Side,
};
pub use embed::{EmbeddingTable, Item, TrainConfig};
pub use error::{Error, Result};
pub use interp::{DecisionList, Prediction};
pub use pools::{PoolState, Seeds};
