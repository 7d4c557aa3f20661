use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::math::{dot, sigmoid};
use super::{EmbeddingTable, Item, NegativeSampler};
use crate::corpus::{CooccurrenceMatrix, EntityId};
use crate::error::{Error, Result};
use crate::pools::PoolState;

/// Settings for one round of embedding training.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    /// Sweeps over the data per bootstrapping epoch.
    pub inner_epochs: usize,
    /// Learning rate of the first sweep.
    pub learning_rate: f64,
    /// Learning rate of the last sweep; decays linearly in between.
    pub min_learning_rate: f64,
    /// Negative patterns per positive occurrence.
    pub neg_samples: usize,
    pub dim: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            inner_epochs: 100,
            learning_rate: 0.05,
            min_learning_rate: 0.0001,
            neg_samples: 5,
            dim: 15,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config("learning rate must be positive".into()));
        }
        if !(self.min_learning_rate > 0.0 && self.min_learning_rate <= self.learning_rate) {
            return Err(Error::Config(
                "minimum learning rate must be positive and at most the learning rate".into(),
            ));
        }
        if self.neg_samples == 0 {
            return Err(Error::Config("need at least one negative sample".into()));
        }
        if self.dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        Ok(())
    }

    fn rate(&self, epoch: usize) -> f64 {
        if self.inner_epochs <= 1 {
            return self.learning_rate;
        }
        let t = epoch as f64 / (self.inner_epochs - 1) as f64;
        self.learning_rate + (self.min_learning_rate - self.learning_rate) * t
    }
}

/// Symmetric update of a pair of rows: both move by `g` times the other's
/// old value. Returns false if either row stopped being finite.
fn pair_step(
    table: &mut EmbeddingTable,
    a: Item,
    b: Item,
    attract: bool,
    lr: f64,
    bufs: &mut (Vec<f64>, Vec<f64>),
) -> bool {
    let (ua, ub) = bufs;
    ua.copy_from_slice(table.item(a));
    ub.copy_from_slice(table.item(b));
    let x = dot(ua, ub);
    let g = if attract { lr * (1.0 - sigmoid(x)) } else { -lr * sigmoid(x) };
    let row = table.item_mut(a);
    for (ai, bi) in row.iter_mut().zip(ub.iter()) {
        *ai += g * bi;
    }
    let ok_a = row.iter().all(|x| x.is_finite());
    let row = table.item_mut(b);
    for (bi, ai) in row.iter_mut().zip(ua.iter()) {
        *bi += g * ai;
    }
    ok_a && row.iter().all(|x| x.is_finite())
}

/// Gradient-ascent training on SG + Attract + Repel.
///
/// Each sweep visits every entity/pattern co-occurrence once per count, in a
/// seeded shuffled order, with `neg_samples` fresh negatives; then every
/// attract pair and every repel pair of the current pools. Pools are read,
/// never changed.
pub fn train_inner(
    table: &mut EmbeddingTable,
    cooc: &CooccurrenceMatrix,
    pools: &PoolState,
    cfg: &TrainConfig,
) -> Result<()> {
    cfg.validate()?;
    if cfg.inner_epochs == 0 {
        return Ok(());
    }
    if cooc.n_entities() > table.n_entities() || cooc.n_patterns() > table.n_patterns() {
        return Err(Error::Config("co-occurrence matrix larger than embedding table".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sampler = NegativeSampler::new(cooc);

    let mut occurrences = Vec::with_capacity(cooc.total() as usize);
    for e in (0..cooc.n_entities() as u32).map(EntityId) {
        for &(p, count) in cooc.row(e) {
            occurrences.extend(std::iter::repeat_n((e, p), count as usize));
        }
    }
    let items: Vec<Vec<Item>> = (0..pools.n_categories()).map(|c| pools.items(c)).collect();
    if let Some(bad) = items.iter().flatten().find(|&&i| !table.contains(i)) {
        return Err(Error::Config(format!("pooled {bad:?} has no embedding")));
    }

    let dim = table.dim();
    let mut ve = vec![0.0; dim];
    let mut grad_e = vec![0.0; dim];
    let mut bufs = (vec![0.0; dim], vec![0.0; dim]);
    let mut targets = Vec::with_capacity(cfg.neg_samples + 1);

    for epoch in 0..cfg.inner_epochs {
        let lr = cfg.rate(epoch);
        let mut step = 0;
        let diverged = |step| Error::NonFinite { epoch, step };
        occurrences.shuffle(&mut rng);

        for &(e, p) in &occurrences {
            ve.copy_from_slice(table.entity(e));
            grad_e.iter_mut().for_each(|g| *g = 0.0);
            targets.clear();
            targets.push((p, 1.0));
            targets.extend(
                sampler
                    .sample(e, cfg.neg_samples, cooc, &mut rng)
                    .into_iter()
                    .map(|n| (n, 0.0)),
            );
            for &(t, label) in &targets {
                let vt = table.pattern_mut(t);
                let g = lr * (label - sigmoid(dot(&ve, vt)));
                for ((ge, vti), vei) in grad_e.iter_mut().zip(vt.iter_mut()).zip(&ve) {
                    *ge += g * *vti;
                    *vti += g * vei;
                }
                if !vt.iter().all(|x| x.is_finite()) {
                    return Err(diverged(step));
                }
            }
            let row = table.entity_mut(e);
            for (x, g) in row.iter_mut().zip(&grad_e) {
                *x += g;
            }
            if !row.iter().all(|x| x.is_finite()) {
                return Err(diverged(step));
            }
            step += 1;
        }

        for pool in &items {
            for (i, &a) in pool.iter().enumerate() {
                for &b in &pool[i + 1..] {
                    if !pair_step(table, a, b, true, lr, &mut bufs) {
                        return Err(diverged(step));
                    }
                    step += 1;
                }
            }
        }
        for (i, p1) in items.iter().enumerate() {
            for p2 in &items[i + 1..] {
                for &a in p1 {
                    for &b in p2 {
                        if !pair_step(table, a, b, false, lr, &mut bufs) {
                            return Err(diverged(step));
                        }
                        step += 1;
                    }
                }
            }
        }
    }
    Ok(())
}
