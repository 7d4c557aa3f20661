use std::collections::HashMap;

use rand::Rng;

use super::math::{dot, log_sigmoid, sigmoid};
use super::{EmbeddingTable, Item, NegativeSampler};
use crate::corpus::{CooccurrenceMatrix, EntityId, PatternId};
use crate::error::{Error, Result};
use crate::pools::PoolState;

/// A fixed set of negative patterns per entity, so that the objective is a
/// deterministic function of the table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NegativeAssignment {
    by_entity: HashMap<EntityId, Vec<PatternId>>,
}

impl NegativeAssignment {
    pub fn set(&mut self, e: EntityId, negatives: Vec<PatternId>) {
        self.by_entity.insert(e, negatives);
    }

    pub fn get(&self, e: EntityId) -> &[PatternId] {
        self.by_entity.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Draws `k` negatives for every entity.
    pub fn sample<R: Rng + ?Sized>(cooc: &CooccurrenceMatrix, k: usize, rng: &mut R) -> Self {
        let sampler = NegativeSampler::new(cooc);
        let mut out = Self::default();
        for e in 0..cooc.n_entities() as u32 {
            out.set(EntityId(e), sampler.sample(EntityId(e), k, cooc, rng));
        }
        out
    }
}

fn check_shapes(
    table: &EmbeddingTable,
    cooc: &CooccurrenceMatrix,
    pools: &PoolState,
    negatives: &NegativeAssignment,
) -> Result<()> {
    if cooc.n_entities() > table.n_entities() || cooc.n_patterns() > table.n_patterns() {
        return Err(Error::Config(format!(
            "table has {}x{} rows, co-occurrences need {}x{}",
            table.n_entities(),
            table.n_patterns(),
            cooc.n_entities(),
            cooc.n_patterns()
        )));
    }
    for c in 0..pools.n_categories() {
        if let Some(item) = pools.items(c).into_iter().find(|&i| !table.contains(i)) {
            return Err(Error::Config(format!(
                "pooled {item:?} of {} has no embedding",
                pools.categories()[c]
            )));
        }
    }
    if let Some(p) = negatives
        .by_entity
        .values()
        .flatten()
        .find(|p| !table.contains(Item::Pattern(**p)))
    {
        return Err(Error::Config(format!("negative {p:?} has no embedding")));
    }
    Ok(())
}

/// Adds `weight * log σ(sign · u·v)` to the running value and, when a
/// gradient buffer is given, its partial derivatives for `a` and `b`.
fn pair_term(
    table: &EmbeddingTable,
    grad: Option<&mut EmbeddingTable>,
    a: Item,
    b: Item,
    sign: f64,
    weight: f64,
) -> f64 {
    let (u, v) = (table.item(a), table.item(b));
    let x = sign * dot(u, v);
    if let Some(grad) = grad {
        // d/du log σ(s u·v) = s σ(-s u·v) v
        let g = weight * sign * sigmoid(-x);
        let (u, v) = (u.to_vec(), v.to_vec());
        for (gi, vi) in grad.item_mut(a).iter_mut().zip(&v) {
            *gi += g * vi;
        }
        for (gi, ui) in grad.item_mut(b).iter_mut().zip(&u) {
            *gi += g * ui;
        }
    }
    weight * log_sigmoid(x)
}

fn accumulate(
    table: &EmbeddingTable,
    cooc: &CooccurrenceMatrix,
    pools: &PoolState,
    negatives: &NegativeAssignment,
    mut grad: Option<&mut EmbeddingTable>,
) -> f64 {
    let mut sg = 0.0;
    for e in (0..cooc.n_entities() as u32).map(EntityId) {
        for &(p, count) in cooc.row(e) {
            sg += pair_term(table, grad.as_deref_mut(), Item::Entity(e), Item::Pattern(p), 1.0, count as f64);
        }
        for &n in negatives.get(e) {
            sg += pair_term(table, grad.as_deref_mut(), Item::Entity(e), Item::Pattern(n), -1.0, 1.0);
        }
    }
    let items: Vec<Vec<Item>> = (0..pools.n_categories()).map(|c| pools.items(c)).collect();
    let mut attract = 0.0;
    for pool in &items {
        for (i, &a) in pool.iter().enumerate() {
            for &b in &pool[i + 1..] {
                attract += pair_term(table, grad.as_deref_mut(), a, b, 1.0, 1.0);
            }
        }
    }
    let mut repel = 0.0;
    for (i, p1) in items.iter().enumerate() {
        for p2 in &items[i + 1..] {
            for &a in p1 {
                for &b in p2 {
                    repel += pair_term(table, grad.as_deref_mut(), a, b, -1.0, 1.0);
                }
            }
        }
    }
    sg + attract + repel
}

/// J = SG + Attract + Repel for a fixed negative assignment.
///
/// * SG sums `count(e,p) · log σ(v_e·v_p)` over co-occurring pairs and
///   `log σ(-v_e·v_n)` over each entity's negatives.
/// * Attract sums `log σ(v_a·v_b)` over unordered pairs of distinct items in
///   the same category (entity pool ∪ pattern pool).
/// * Repel sums `log σ(-v_a·v_b)` over items of two different categories,
///   each cross pair once.
///
/// Always ≤ 0.
pub fn objective(
    table: &EmbeddingTable,
    cooc: &CooccurrenceMatrix,
    pools: &PoolState,
    negatives: &NegativeAssignment,
) -> Result<f64> {
    check_shapes(table, cooc, pools, negatives)?;
    Ok(accumulate(table, cooc, pools, negatives, None))
}

/// [`objective`] together with its gradient, shaped like the table.
pub fn objective_gradient(
    table: &EmbeddingTable,
    cooc: &CooccurrenceMatrix,
    pools: &PoolState,
    negatives: &NegativeAssignment,
) -> Result<(f64, EmbeddingTable)> {
    check_shapes(table, cooc, pools, negatives)?;
    let mut grad = EmbeddingTable::zeros(table.n_entities(), table.n_patterns(), table.dim());
    let value = accumulate(table, cooc, pools, negatives, Some(&mut grad));
    Ok((value, grad))
}
