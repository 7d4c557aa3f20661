use super::{edit_distance, PmiStats, PretrainedVectors};
use crate::corpus::{CooccurrenceMatrix, EntityId, EntityVocab};
use crate::embed::{cosine, EmbeddingTable};
use crate::pools::PoolState;

/// Features per category: min and mean normalized edit distance, summed
/// PMI, mean and max custom cosine, mean and max pretrained cosine.
pub const FEATURES_PER_CATEGORY: usize = 7;

/// Concatenated per-category feature blocks, in category order.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn block(&self, c: usize) -> &[f64] {
        &self.0[c * FEATURES_PER_CATEGORY..(c + 1) * FEATURES_PER_CATEGORY]
    }
}

/// Everything featurization reads, frozen for one epoch.
pub struct FeatureContext<'a> {
    pub pools: &'a PoolState,
    pub cooc: &'a CooccurrenceMatrix,
    pub entities: &'a EntityVocab,
    pub pmi: &'a PmiStats,
    /// Custom embeddings; `None` zeroes the custom-cosine features.
    pub custom: Option<&'a EmbeddingTable>,
    /// Word-averaged pretrained vector per entity id.
    pub pretrained: &'a [Vec<f64>],
}

/// Word-averaged pretrained vector for every entity (zero if no word is known).
pub fn entity_pretrained(entities: &EntityVocab, vectors: &PretrainedVectors) -> Vec<Vec<f64>> {
    entities
        .ids()
        .map(|e| vectors.phrase_or_zero(entities.surface(e).split(' ')))
        .collect()
}

fn normalized_edit(a: &str, b: &str) -> f64 {
    let len = a.chars().count().max(b.chars().count());
    if len == 0 {
        return 0.0;
    }
    edit_distance(a, b) as f64 / len as f64
}

fn mean_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut sum, mut max, mut n) = (0.0, f64::NEG_INFINITY, 0usize);
    for v in values {
        sum += v;
        max = max.max(v);
        n += 1;
    }
    if n == 0 {
        (0.0, 0.0)
    } else {
        (sum / n as f64, max)
    }
}

/// Feature vector of entity `e` against every category's pools.
///
/// If `e` is itself pooled it is left out of its own comparisons, so pooled
/// entities (the classifier's training data) look like candidates do.
pub fn featurize(e: EntityId, ctx: &FeatureContext<'_>) -> FeatureVector {
    let k = ctx.pools.n_categories();
    let mut out = Vec::with_capacity(k * FEATURES_PER_CATEGORY);
    let surface = ctx.entities.surface(e);
    for c in 0..k {
        let others: Vec<EntityId> = ctx
            .pools
            .entities(c)
            .iter()
            .map(|x| x.id)
            .filter(|&x| x != e)
            .collect();

        let (mean_edit, min_edit) = if others.is_empty() {
            (1.0, 1.0)
        } else {
            let d: Vec<f64> = others
                .iter()
                .map(|&x| normalized_edit(surface, ctx.entities.surface(x)))
                .collect();
            (
                d.iter().sum::<f64>() / d.len() as f64,
                d.iter().copied().fold(f64::INFINITY, f64::min),
            )
        };

        let sum_pmi: f64 = ctx
            .cooc
            .row(e)
            .iter()
            .filter(|&&(p, _)| ctx.pools.pattern_owner(p) == Some(c))
            .map(|&(p, _)| ctx.pmi.pmi(p, c))
            .filter(|v| v.is_finite())
            .sum();

        let (avg_custom, max_custom) = match ctx.custom {
            Some(table) => {
                let v = table.entity(e);
                mean_max(others.iter().map(|&x| cosine(v, table.entity(x)).unwrap_or(0.0)))
            }
            None => (0.0, 0.0),
        };
        let v = &ctx.pretrained[e.index()];
        let (avg_pre, max_pre) = mean_max(
            others
                .iter()
                .map(|&x| cosine(v, &ctx.pretrained[x.index()]).unwrap_or(0.0)),
        );

        out.extend_from_slice(&[
            min_edit, mean_edit, sum_pmi, avg_custom, max_custom, avg_pre, max_pre,
        ]);
    }
    FeatureVector(out)
}
