//! Global interpretable model: every pooled pattern gets a distribution over
//! categories from the cosine between its embedding and each category's
//! centroid, and entities are classified by Noisy-Or over the patterns they
//! match.

use std::collections::HashMap;
use std::io::Write;

use crate::corpus::{CooccurrenceMatrix, EntityId, PatternId, PatternVocab};
use crate::embed::{cosine, EmbeddingTable};
use crate::error::{Error, Result};
use crate::pools::PoolState;

/// Mean custom vector of the entities pooled under `c`.
pub fn category_centroid(c: usize, pools: &PoolState, table: &EmbeddingTable) -> Result<Vec<f64>> {
    mean_of(pools.entities(c).iter().map(|x| table.entity(x.id)), table.dim())
        .ok_or_else(|| Error::EmptyPool(pools.categories()[c].clone()))
}

fn mean_of<'a>(rows: impl Iterator<Item = &'a [f64]>, dim: usize) -> Option<Vec<f64>> {
    let mut sum = vec![0.0; dim];
    let mut n = 0usize;
    for row in rows {
        sum.iter_mut().zip(row).for_each(|(s, v)| *s += v);
        n += 1;
    }
    (n > 0).then(|| sum.into_iter().map(|s| s / n as f64).collect())
}

/// Softmax (temperature 1) over the cosines between `v` and each centroid.
pub fn softmax_cosines(v: &[f64], centroids: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut z = centroids
        .iter()
        .map(|c| cosine(v, c))
        .collect::<Result<Vec<f64>>>()?;
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in &mut z {
        *x = (*x - max).exp();
        sum += *x;
    }
    z.iter_mut().for_each(|x| *x /= sum);
    Ok(z)
}

/// Category distribution of pattern `p` under the custom table.
pub fn pattern_probs(p: PatternId, centroids: &[Vec<f64>], table: &EmbeddingTable) -> Result<Vec<f64>> {
    softmax_cosines(table.pattern(p), centroids)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionEntry {
    pub pattern: PatternId,
    /// Category whose pattern pool holds the pattern.
    pub pool: usize,
    /// One probability per category, summing to 1.
    pub probs: Vec<f64>,
}

impl DecisionEntry {
    fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The pooled patterns of one snapshot with their category distributions,
/// sorted by their largest probability (descending).
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionList {
    categories: Vec<String>,
    entries: Vec<DecisionEntry>,
    index: HashMap<PatternId, usize>,
    epoch: usize,
}

impl DecisionList {
    /// Builds a list over the pattern pools of `pools`. `vector` gives each
    /// pattern's vector; patterns without one get a uniform distribution.
    pub fn build_with<F>(pools: &PoolState, centroids: &[Vec<f64>], epoch: usize, mut vector: F) -> Result<Self>
    where
        F: FnMut(PatternId) -> Option<Vec<f64>>,
    {
        let k = pools.n_categories();
        let mut entries = Vec::with_capacity(pools.n_patterns());
        for c in 0..k {
            for x in pools.patterns(c) {
                let probs = match vector(x.id) {
                    Some(v) => softmax_cosines(&v, centroids)?,
                    None => vec![1.0 / k as f64; k],
                };
                entries.push(DecisionEntry {
                    pattern: x.id,
                    pool: c,
                    probs,
                });
            }
        }
        entries.sort_by(|a, b| b.max_prob().total_cmp(&a.max_prob()).then(a.pattern.cmp(&b.pattern)));
        let index = entries.iter().enumerate().map(|(i, x)| (x.pattern, i)).collect();
        Ok(Self {
            categories: pools.categories().to_vec(),
            entries,
            index,
            epoch,
        })
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn entries(&self) -> &[DecisionEntry] {
        &self.entries
    }

    pub fn get(&self, p: PatternId) -> Option<&DecisionEntry> {
        self.index.get(&p).map(|&i| &self.entries[i])
    }

    /// Epoch of the snapshot the list was built from.
    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// TSV export: header `pattern` plus category names, then one row per
    /// entry with six-decimal probabilities.
    pub fn write_tsv<W: Write>(&self, mut out: W, patterns: &PatternVocab) -> Result<()> {
        write!(out, "pattern")?;
        for c in &self.categories {
            write!(out, "\t{c}")?;
        }
        writeln!(out)?;
        for entry in &self.entries {
            write!(out, "{}", patterns.rendered(entry.pattern))?;
            for p in &entry.probs {
                write!(out, "\t{p:.6}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Decision list from the custom embeddings of `pools` at `epoch`.
pub fn build_decision_list(pools: &PoolState, table: &EmbeddingTable, epoch: usize) -> Result<DecisionList> {
    if pools.n_patterns() == 0 {
        return DecisionList::build_with(pools, &[], epoch, |_| None);
    }
    let centroids = (0..pools.n_categories())
        .map(|c| category_centroid(c, pools, table))
        .collect::<Result<Vec<_>>>()?;
    DecisionList::build_with(pools, &centroids, epoch, |p| Some(table.pattern(p).to_vec()))
}

/// `1 − Π (1 − prob_c(p))` over the patterns of category `c`'s pool that
/// match `e` somewhere in the corpus; 0 when none do.
pub fn noisy_or_score(e: EntityId, c: usize, dl: &DecisionList, cooc: &CooccurrenceMatrix) -> f64 {
    noisy_or(
        cooc.row(e)
            .iter()
            .filter_map(|&(p, _)| dl.get(p))
            .filter(|x| x.pool == c)
            .map(|x| x.probs[c]),
    )
}

/// `1 − Π (1 − p_i)`.
pub fn noisy_or(probs: impl IntoIterator<Item = f64>) -> f64 {
    1.0 - probs.into_iter().map(|p| 1.0 - p).product::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prediction {
    Category(usize),
    /// No pooled pattern matches the entity.
    Abstain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub label: Prediction,
    pub scores: Vec<f64>,
    /// Matching patterns behind the predicted category (0 on abstain).
    pub contributing: usize,
}

/// Highest Noisy-Or score wins; ties go to the earlier category.
pub fn classify(e: EntityId, dl: &DecisionList, cooc: &CooccurrenceMatrix) -> Classification {
    let k = dl.categories().len();
    let mut matched = vec![Vec::new(); k];
    for &(p, _) in cooc.row(e) {
        if let Some(x) = dl.get(p) {
            matched[x.pool].push(x.probs[x.pool]);
        }
    }
    let scores: Vec<f64> = matched.iter().map(|m| noisy_or(m.iter().copied())).collect();
    let mut best: Option<usize> = None;
    for (c, &s) in scores.iter().enumerate() {
        if s > 0.0 && best.is_none_or(|b| s > scores[b]) {
            best = Some(c);
        }
    }
    match best {
        Some(c) => Classification {
            label: Prediction::Category(c),
            contributing: matched[c].len(),
            scores,
        },
        None => Classification {
            label: Prediction::Abstain,
            contributing: 0,
            scores,
        },
    }
}
