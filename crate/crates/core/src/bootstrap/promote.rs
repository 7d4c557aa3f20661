use std::collections::{BTreeSet, HashSet};
use std::hash::Hash;

use super::PmiStats;
use crate::corpus::{CooccurrenceMatrix, EntityId, EntityVocab, PatternId, PatternVocab};
use crate::pools::PoolState;

/// Patterns must match at least this many distinct entities pooled under a
/// category to be promoted into it.
pub const MIN_PATTERN_SUPPORT: u32 = 2;

struct Bid<T> {
    category: usize,
    item: T,
    score: f64,
    support: u64,
    name: String,
}

/// Hands out items to categories from the best bid down. Each item goes to
/// at most one category and each category takes at most `quota` items, so a
/// contested item lands where it scores highest and the other category moves
/// on to its next bid.
fn assign<T: Copy + Eq + Hash>(mut bids: Vec<Bid<T>>, n_categories: usize, quota: usize) -> Vec<(usize, T, f64)> {
    bids.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(b.support.cmp(&a.support))
            .then_with(|| a.name.cmp(&b.name))
            .then(a.category.cmp(&b.category))
    });
    let mut taken = HashSet::new();
    let mut filled = vec![0usize; n_categories];
    let mut out = Vec::new();
    for bid in bids {
        if filled[bid.category] < quota && !taken.contains(&bid.item) {
            taken.insert(bid.item);
            filled[bid.category] += 1;
            out.push((bid.category, bid.item, bid.score));
        }
    }
    out
}

/// Promotes up to `k_pat` unpooled patterns per category, ranked by PMI
/// (ties: more matches with the pool, then rendered form). Returns the
/// promotions in the order they were made.
pub fn promote_patterns(
    pools: &mut PoolState,
    stats: &PmiStats,
    patterns: &PatternVocab,
    epoch: usize,
    k_pat: usize,
) -> Vec<(usize, PatternId)> {
    let mut bids = Vec::new();
    for p in patterns.ids() {
        if pools.pattern_owner(p).is_some() {
            continue;
        }
        for c in 0..pools.n_categories() {
            if stats.distinct_entities(p, c) >= MIN_PATTERN_SUPPORT {
                bids.push(Bid {
                    category: c,
                    item: p,
                    score: stats.pmi(p, c),
                    support: stats.joint(p, c),
                    name: patterns.rendered(p).to_string(),
                });
            }
        }
    }
    let promoted = assign(bids, pools.n_categories(), k_pat);
    promoted
        .into_iter()
        .map(|(c, p, score)| {
            pools.add_pattern(c, p, epoch, score);
            (c, p)
        })
        .collect()
}

/// Unpooled entities matched by at least one pooled pattern, in id order.
pub fn candidate_entities(pools: &PoolState, cooc: &CooccurrenceMatrix) -> Vec<EntityId> {
    let mut out = BTreeSet::new();
    for c in 0..pools.n_categories() {
        for p in pools.patterns(c) {
            out.extend(
                cooc.col(p.id)
                    .iter()
                    .map(|&(e, _)| e)
                    .filter(|&e| pools.entity_owner(e).is_none()),
            );
        }
    }
    out.into_iter().collect()
}

/// Promotes up to `k_ent` candidates per category by classifier probability
/// (ties: higher corpus frequency, then surface). `probs` holds one class
/// distribution per candidate.
pub fn promote_entities(
    pools: &mut PoolState,
    probs: &[(EntityId, Vec<f64>)],
    entities: &EntityVocab,
    epoch: usize,
    k_ent: usize,
) -> Vec<(usize, EntityId)> {
    let mut bids = Vec::new();
    for (e, dist) in probs {
        if pools.entity_owner(*e).is_some() {
            continue;
        }
        for (c, &score) in dist.iter().enumerate().take(pools.n_categories()) {
            bids.push(Bid {
                category: c,
                item: *e,
                score,
                support: u64::from(entities.frequency(*e)),
                name: entities.surface(*e).to_string(),
            });
        }
    }
    assign(bids, pools.n_categories(), k_ent)
        .into_iter()
        .map(|(c, e, score)| {
            pools.add_entity(c, e, epoch, score);
            (c, e)
        })
        .collect()
}
