//! The outer bootstrapping loop: pattern promotion by PMI, entity promotion
//! by a multinomial classifier over edit-distance, PMI and similarity
//! features.

mod classifier;
mod edit;
mod features;
mod pmi;
mod pretrained;
mod promote;
mod run;

pub use classifier::{train_promotion_classifier, ClassifierConfig, PromotionModel};
pub use edit::edit_distance;
pub use features::{entity_pretrained, featurize, FeatureContext, FeatureVector, FEATURES_PER_CATEGORY};
pub use pmi::{pmi, pmi_from_counts, PmiStats};
pub use pretrained::PretrainedVectors;
pub use promote::{candidate_entities, promote_entities, promote_patterns, MIN_PATTERN_SUPPORT};
pub use run::{run, BootstrapConfig, Outcome, System, Trace};
pub(crate) use run::run_with;
