use rand::Rng;

use crate::corpus::{CooccurrenceMatrix, EntityId, PatternId};

/// Draws negative patterns from the pattern unigram distribution raised to
/// the 3/4 power, skipping patterns seen with the entity.
#[derive(Clone, Debug)]
pub struct NegativeSampler {
    cumulative: Vec<f64>,
}

impl NegativeSampler {
    pub fn new(cooc: &CooccurrenceMatrix) -> Self {
        let mut acc = 0.0;
        let cumulative = cooc
            .pattern_marginals()
            .iter()
            .map(|&m| {
                acc += (m as f64).powf(0.75);
                acc
            })
            .collect();
        Self { cumulative }
    }

    fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> PatternId {
        let u = rng.random::<f64>() * self.total();
        let i = self.cumulative.partition_point(|&c| c <= u);
        PatternId(i.min(self.cumulative.len() - 1) as u32)
    }

    /// Up to `k` distinct patterns never observed with `e`. When at most `k`
    /// patterns are eligible, all of them are returned in id order.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        e: EntityId,
        k: usize,
        cooc: &CooccurrenceMatrix,
        rng: &mut R,
    ) -> Vec<PatternId> {
        let positives = cooc.row(e);
        let is_positive = |p: PatternId| positives.binary_search_by_key(&p, |&(q, _)| q).is_ok();
        let n = self.cumulative.len();
        if n - positives.len() <= k {
            return (0..n as u32).map(PatternId).filter(|&p| !is_positive(p)).collect();
        }
        let mut chosen: Vec<PatternId> = Vec::with_capacity(k);
        let mut attempts = 0;
        while chosen.len() < k && attempts < 64 * k && self.total() > 0.0 {
            attempts += 1;
            let p = self.draw(rng);
            if !is_positive(p) && !chosen.contains(&p) {
                chosen.push(p);
            }
        }
        if chosen.len() < k {
            // Positives hold most of the mass: sample the rest exactly.
            self.fill_exact(&mut chosen, k, &is_positive, rng);
        }
        chosen
    }

    fn fill_exact<R: Rng + ?Sized>(
        &self,
        chosen: &mut Vec<PatternId>,
        k: usize,
        is_positive: &dyn Fn(PatternId) -> bool,
        rng: &mut R,
    ) {
        let mut pool: Vec<(PatternId, f64)> = (0..self.cumulative.len())
            .map(|i| {
                let w = self.cumulative[i] - if i == 0 { 0.0 } else { self.cumulative[i - 1] };
                (PatternId(i as u32), w)
            })
            .filter(|&(p, _)| !is_positive(p) && !chosen.contains(&p))
            .collect();
        while chosen.len() < k && !pool.is_empty() {
            let total: f64 = pool.iter().map(|&(_, w)| w).sum();
            let idx = if total > 0.0 {
                let mut u = rng.random::<f64>() * total;
                pool.iter()
                    .position(|&(_, w)| {
                        u -= w;
                        u < 0.0
                    })
                    .unwrap_or(pool.len() - 1)
            } else {
                0
            };
            chosen.push(pool.swap_remove(idx).0);
        }
    }
}

/// One-shot convenience wrapper around [`NegativeSampler::sample`].
pub fn sample_negative_patterns<R: Rng + ?Sized>(
    e: EntityId,
    k: usize,
    cooc: &CooccurrenceMatrix,
    rng: &mut R,
) -> Vec<PatternId> {
    NegativeSampler::new(cooc).sample(e, k, cooc, rng)
}
