use rayon::prelude::*;

use crate::bootstrap::{BootstrapConfig, Outcome, System, Trace};
use crate::corpus::{CooccurrenceMatrix, CorpusStats, EntityId};
use crate::error::{Error, Result};
use crate::pools::{init_pools, Seeds};

#[derive(Clone, Debug, PartialEq)]
pub struct LpConfig {
    /// RBF kernel width; `None` means 1 / number of patterns.
    pub gamma: Option<f64>,
    pub max_iter: usize,
    /// Stop once no label probability moves by this much in one iteration.
    pub tolerance: f64,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self {
            gamma: None,
            max_iter: 1000,
            tolerance: 1e-6,
        }
    }
}

/// Row-normalized RBF similarity graph over entity co-occurrence rows.
#[derive(Clone, Debug)]
pub struct LpGraph {
    n: usize,
    transition: Vec<f64>,
}

fn sparse_dot(a: &[(crate::corpus::PatternId, u32)], b: &[(crate::corpus::PatternId, u32)]) -> f64 {
    let (mut i, mut j, mut acc) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += f64::from(a[i].1) * f64::from(b[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

impl LpGraph {
    /// `T_ij = K_ij / Σ_j K_ij` with `K_ij = exp(−γ ‖x_i − x_j‖²)`, self
    /// loops included. Dense: memory grows with the square of the entity count.
    pub fn new(cooc: &CooccurrenceMatrix, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Config(format!("kernel width must be positive, got {gamma}")));
        }
        let n = cooc.n_entities();
        let rows: Vec<_> = (0..n as u32).map(|e| cooc.row(EntityId(e))).collect();
        let norms: Vec<f64> = rows.iter().map(|r| sparse_dot(r, r)).collect();
        let mut transition = vec![0.0; n * n];
        transition.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, out)| {
            for (j, k) in out.iter_mut().enumerate() {
                let d2 = (norms[i] + norms[j] - 2.0 * sparse_dot(rows[i], rows[j])).max(0.0);
                *k = (-gamma * d2).exp();
            }
            let sum: f64 = out.iter().sum();
            out.iter_mut().for_each(|k| *k /= sum);
        });
        Ok(Self { n, transition })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.transition[i * self.n..(i + 1) * self.n]
    }

    /// Iterates `Y ← T Y` with seed rows clamped to their one-hot labels,
    /// starting from uniform rows for unlabeled entities.
    pub fn propagate(
        &self,
        seeds: &[(EntityId, usize)],
        n_classes: usize,
        max_iter: usize,
        tolerance: f64,
    ) -> Result<Vec<Vec<f64>>> {
        let mut clamped = vec![None; self.n];
        for &(e, c) in seeds {
            if e.index() >= self.n || c >= n_classes {
                return Err(Error::Config(format!("seed {e} outside the graph")));
            }
            clamped[e.index()] = Some(c);
        }
        let init = |i: usize| match clamped[i] {
            Some(c) => (0..n_classes).map(|k| f64::from(u8::from(k == c))).collect(),
            None => vec![1.0 / n_classes as f64; n_classes],
        };
        let mut y: Vec<Vec<f64>> = (0..self.n).map(init).collect();
        for _ in 0..max_iter {
            let next: Vec<Vec<f64>> = (0..self.n)
                .into_par_iter()
                .map(|i| {
                    if clamped[i].is_some() {
                        return y[i].clone();
                    }
                    let mut out = vec![0.0; n_classes];
                    for (t, row) in self.row(i).iter().zip(&y) {
                        out.iter_mut().zip(row).for_each(|(o, v)| *o += t * v);
                    }
                    out
                })
                .collect();
            let change = next
                .iter()
                .zip(&y)
                .flat_map(|(a, b)| a.iter().zip(b).map(|(x, z)| (x - z).abs()))
                .fold(0.0, f64::max);
            y = next;
            if change < tolerance {
                break;
            }
        }
        Ok(y)
    }
}

/// Builds the graph and propagates in one call.
pub fn label_propagation(
    cooc: &CooccurrenceMatrix,
    seeds: &[(EntityId, usize)],
    n_classes: usize,
    config: &LpConfig,
) -> Result<Vec<Vec<f64>>> {
    let gamma = config.gamma.unwrap_or(1.0 / cooc.n_patterns().max(1) as f64);
    LpGraph::new(cooc, gamma)?.propagate(seeds, n_classes, config.max_iter, config.tolerance)
}

/// Shannon entropy in nats.
pub fn entropy(dist: &[f64]) -> f64 {
    -dist.iter().filter(|&&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
}

/// Bootstrapping with label propagation: each epoch propagates from the
/// current pools and promotes the lowest-entropy unpooled entities into their
/// most probable category, at most `k_ent` per category.
pub fn lp_bootstrap_run(
    config: &BootstrapConfig,
    stats: &CorpusStats,
    seeds: &Seeds,
    lp: &LpConfig,
) -> Result<Outcome> {
    config.validate()?;
    let mut pools = init_pools(seeds, &stats.entities)?;
    let k = pools.n_categories();
    let gamma = lp.gamma.unwrap_or(1.0 / stats.cooc.n_patterns().max(1) as f64);
    let graph = LpGraph::new(&stats.cooc, gamma)?;
    let mut snapshots = vec![pools.clone()];
    for epoch in 1..=config.epochs {
        let labels: Vec<(EntityId, usize)> = (0..k)
            .flat_map(|c| pools.entities(c).iter().map(move |x| (x.id, c)))
            .collect();
        let y = graph.propagate(&labels, k, lp.max_iter, lp.tolerance)?;
        let mut ranked: Vec<(EntityId, f64)> = stats
            .entities
            .ids()
            .filter(|&e| pools.entity_owner(e).is_none())
            .map(|e| (e, entropy(&y[e.index()])))
            .collect();
        ranked.sort_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then(stats.entities.frequency(b.0).cmp(&stats.entities.frequency(a.0)))
                .then_with(|| stats.entities.surface(a.0).cmp(stats.entities.surface(b.0)))
        });
        let mut filled = vec![0usize; k];
        for (e, _) in ranked {
            if filled.iter().all(|&f| f >= config.k_ent) {
                break;
            }
            let dist = &y[e.index()];
            let c = (0..k).fold(0, |best, c| if dist[c] > dist[best] { c } else { best });
            if filled[c] < config.k_ent {
                filled[c] += 1;
                pools.add_entity(c, e, epoch, dist[c]);
            }
        }
        snapshots.push(pools.clone());
    }
    Ok(Outcome {
        trace: Trace {
            system: System::Lp,
            snapshots,
        },
        table: None,
    })
}
