//! Comparison systems: bootstrapping without custom embeddings (EPB), its
//! pretrained-embedding decision list, and label propagation.

mod epb;
mod lp;

pub use epb::{epb_int_build, epb_run};
pub use lp::{entropy, label_propagation, lp_bootstrap_run, LpConfig, LpGraph};
