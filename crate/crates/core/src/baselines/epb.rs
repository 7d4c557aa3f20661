use crate::bootstrap::{run_with, BootstrapConfig, Outcome, PretrainedVectors, System};
use crate::corpus::{CorpusStats, EntityVocab, PatternVocab};
use crate::error::Result;
use crate::interp::DecisionList;
use crate::pools::{PoolState, Seeds};

/// The bootstrapping loop without embedding training: custom-cosine features
/// stay zero, pretrained ones remain.
pub fn epb_run(
    config: &BootstrapConfig,
    stats: &CorpusStats,
    seeds: &Seeds,
    pretrained: &PretrainedVectors,
) -> Result<Outcome> {
    run_with(System::Epb, config, stats, seeds, pretrained)
}

/// Decision list over the pattern pools of `pools` using word-averaged
/// pretrained vectors for both the category centroids and the patterns.
/// Patterns with no known token get a uniform distribution.
pub fn epb_int_build(
    pools: &PoolState,
    pretrained: &PretrainedVectors,
    entities: &EntityVocab,
    patterns: &PatternVocab,
    epoch: usize,
) -> Result<DecisionList> {
    let dim = pretrained.dim();
    let centroids: Vec<Vec<f64>> = (0..pools.n_categories())
        .map(|c| {
            let vectors: Vec<Vec<f64>> = pools
                .entities(c)
                .iter()
                .filter_map(|x| pretrained.phrase(entities.surface(x.id).split(' ')))
                .collect();
            let mut sum = vec![0.0; dim];
            for v in &vectors {
                sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
            }
            let n = vectors.len().max(1) as f64;
            sum.into_iter().map(|s| s / n).collect()
        })
        .collect();
    DecisionList::build_with(pools, &centroids, epoch, |p| {
        pretrained.phrase(patterns.get(p).tokens.iter().map(String::as_str))
    })
}
