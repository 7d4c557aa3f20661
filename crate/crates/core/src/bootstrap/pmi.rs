use crate::corpus::{CooccurrenceMatrix, PatternId};
use crate::pools::PoolState;

/// `ln(joint · total / (pattern · category))`, or `-inf` when `joint` is 0.
pub fn pmi_from_counts(joint: u64, pattern: u64, category: u64, total: u64) -> f64 {
    if joint == 0 {
        return f64::NEG_INFINITY;
    }
    ((joint as f64 * total as f64) / (pattern as f64 * category as f64)).ln()
}

/// PMI between pattern `p` and category `c`, counting matches with the
/// entities currently pooled under `c`.
///
/// joint = Σ_{e ∈ pool(c)} count(e, p); pattern = all matches of `p`;
/// category = all matches of the pooled entities; total = all matches.
pub fn pmi(p: PatternId, c: usize, cooc: &CooccurrenceMatrix, pools: &PoolState) -> f64 {
    let joint: u64 = cooc
        .col(p)
        .iter()
        .filter(|&&(e, _)| pools.entity_owner(e) == Some(c))
        .map(|&(_, n)| n as u64)
        .sum();
    let category: u64 = pools
        .entities(c)
        .iter()
        .map(|x| cooc.entity_marginal(x.id))
        .sum();
    pmi_from_counts(joint, cooc.pattern_marginal(p), category, cooc.total())
}

/// Joint pattern/category counts for every pattern against the current
/// pools, so PMI can be read off without rescanning.
#[derive(Clone, Debug)]
pub struct PmiStats {
    joint: Vec<Vec<u64>>,
    distinct: Vec<Vec<u32>>,
    category: Vec<u64>,
    pattern: Vec<u64>,
    total: u64,
}

impl PmiStats {
    pub fn new(cooc: &CooccurrenceMatrix, pools: &PoolState) -> Self {
        let k = pools.n_categories();
        let n = cooc.n_patterns();
        let mut joint = vec![vec![0u64; n]; k];
        let mut distinct = vec![vec![0u32; n]; k];
        let mut category = vec![0u64; k];
        for c in 0..k {
            for x in pools.entities(c) {
                category[c] += cooc.entity_marginal(x.id);
                for &(p, count) in cooc.row(x.id) {
                    joint[c][p.index()] += count as u64;
                    distinct[c][p.index()] += 1;
                }
            }
        }
        Self {
            joint,
            distinct,
            category,
            pattern: cooc.pattern_marginals().to_vec(),
            total: cooc.total(),
        }
    }

    pub fn pmi(&self, p: PatternId, c: usize) -> f64 {
        pmi_from_counts(
            self.joint[c][p.index()],
            self.pattern[p.index()],
            self.category[c],
            self.total,
        )
    }

    /// Matches of `p` with entities pooled under `c`.
    pub fn joint(&self, p: PatternId, c: usize) -> u64 {
        self.joint[c][p.index()]
    }

    /// Number of distinct entities pooled under `c` that `p` matches.
    pub fn distinct_entities(&self, p: PatternId, c: usize) -> u32 {
        self.distinct[c][p.index()]
    }
}
