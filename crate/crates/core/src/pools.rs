//! Per-category entity and pattern pools.

use std::collections::HashMap;

use serde_json::Value;

use crate::corpus::{EntityId, EntityVocab, PatternId};
use crate::embed::Item;
use crate::error::{Error, Result};

/// Seed entity surfaces per category, in category order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Seeds(pub Vec<(String, Vec<String>)>);

impl Seeds {
    /// Parses a JSON object mapping category names to arrays of surfaces.
    /// Key order is kept as the category order.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Config("seeds file must be a JSON object".into()))?;
        let mut seeds = Vec::with_capacity(obj.len());
        for (category, list) in obj {
            let list = list
                .as_array()
                .ok_or_else(|| Error::Config(format!("seeds for {category} must be an array")))?;
            let surfaces = list
                .iter()
                .map(|s| {
                    s.as_str()
                        .map(String::from)
                        .ok_or_else(|| Error::Config(format!("non-string seed under {category}")))
                })
                .collect::<Result<_>>()?;
            seeds.push((category.clone(), surfaces));
        }
        Ok(Seeds(seeds))
    }

    pub fn to_json(&self) -> String {
        let obj: serde_json::Map<String, Value> = self
            .0
            .iter()
            .map(|(c, s)| (c.clone(), Value::from(s.clone())))
            .collect();
        serde_json::to_string_pretty(&Value::Object(obj)).expect("seeds serialize")
    }
}

/// One pooled item with the epoch it was promoted at (0 for seeds) and its
/// promotion score.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoolEntry<T> {
    pub id: T,
    pub epoch: usize,
    pub score: f64,
}

/// Entity and pattern pools for every category.
///
/// Pools are pairwise disjoint and only grow.
#[derive(Clone, Debug, PartialEq)]
pub struct PoolState {
    categories: Vec<String>,
    entities: Vec<Vec<PoolEntry<EntityId>>>,
    patterns: Vec<Vec<PoolEntry<PatternId>>>,
    entity_owner: HashMap<EntityId, usize>,
    pattern_owner: HashMap<PatternId, usize>,
}

impl PoolState {
    /// Empty pools for the given categories.
    pub fn new(categories: Vec<String>) -> Self {
        let n = categories.len();
        Self {
            categories,
            entities: vec![Vec::new(); n],
            patterns: vec![Vec::new(); n],
            entity_owner: HashMap::new(),
            pattern_owner: HashMap::new(),
        }
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn category_index(&self, name: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == name)
    }

    pub fn entities(&self, c: usize) -> &[PoolEntry<EntityId>] {
        &self.entities[c]
    }

    pub fn patterns(&self, c: usize) -> &[PoolEntry<PatternId>] {
        &self.patterns[c]
    }

    pub fn entity_owner(&self, e: EntityId) -> Option<usize> {
        self.entity_owner.get(&e).copied()
    }

    pub fn pattern_owner(&self, p: PatternId) -> Option<usize> {
        self.pattern_owner.get(&p).copied()
    }

    pub fn n_entities(&self) -> usize {
        self.entity_owner.len()
    }

    pub fn n_patterns(&self) -> usize {
        self.pattern_owner.len()
    }

    /// Adds `e` to category `c`. Returns false (and changes nothing) if `e`
    /// is already pooled anywhere.
    pub fn add_entity(&mut self, c: usize, e: EntityId, epoch: usize, score: f64) -> bool {
        if self.entity_owner.contains_key(&e) {
            return false;
        }
        self.entity_owner.insert(e, c);
        self.entities[c].push(PoolEntry { id: e, epoch, score });
        true
    }

    /// Adds `p` to category `c`. Returns false if `p` is already pooled.
    pub fn add_pattern(&mut self, c: usize, p: PatternId, epoch: usize, score: f64) -> bool {
        if self.pattern_owner.contains_key(&p) {
            return false;
        }
        self.pattern_owner.insert(p, c);
        self.patterns[c].push(PoolEntry { id: p, epoch, score });
        true
    }

    /// Entities then patterns of category `c`, as embedding items.
    pub fn items(&self, c: usize) -> Vec<Item> {
        self.entities[c]
            .iter()
            .map(|x| Item::Entity(x.id))
            .chain(self.patterns[c].iter().map(|x| Item::Pattern(x.id)))
            .collect()
    }

    /// Entities pooled after the seeds, with their category, in pool order.
    pub fn promoted_entities(&self) -> impl Iterator<Item = (usize, &PoolEntry<EntityId>)> {
        self.entities
            .iter()
            .enumerate()
            .flat_map(|(c, pool)| pool.iter().filter(|x| x.epoch > 0).map(move |x| (c, x)))
    }

    /// True if every pool of `earlier` is a prefix of the matching pool here.
    pub fn extends(&self, earlier: &PoolState) -> bool {
        self.categories == earlier.categories
            && (0..self.n_categories()).all(|c| {
                self.entities[c].starts_with(&earlier.entities[c])
                    && self.patterns[c].starts_with(&earlier.patterns[c])
            })
    }

    /// Checks that no entity or pattern sits in two pools.
    pub fn is_disjoint(&self) -> bool {
        let n_ent: usize = self.entities.iter().map(Vec::len).sum();
        let n_pat: usize = self.patterns.iter().map(Vec::len).sum();
        n_ent == self.entity_owner.len() && n_pat == self.pattern_owner.len()
    }
}

/// Creates pools holding exactly the seeds, at epoch 0, with empty pattern pools.
pub fn init_pools(seeds: &Seeds, vocab: &EntityVocab) -> Result<PoolState> {
    if seeds.0.is_empty() {
        return Err(Error::NoCategories);
    }
    let mut pools = PoolState::new(seeds.0.iter().map(|(c, _)| c.clone()).collect());
    for (c, (_, surfaces)) in seeds.0.iter().enumerate() {
        for surface in surfaces {
            let e = vocab
                .id(surface)
                .ok_or_else(|| Error::UnknownSeed(surface.clone()))?;
            if let Some(owner) = pools.entity_owner(e) {
                if owner != c {
                    return Err(Error::DuplicateSeed {
                        surface: surface.clone(),
                        first: pools.categories[owner].clone(),
                        second: pools.categories[c].clone(),
                    });
                }
                continue;
            }
            pools.add_entity(c, e, 0, 1.0);
        }
    }
    Ok(pools)
}
