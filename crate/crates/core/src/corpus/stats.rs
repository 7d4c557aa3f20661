use std::collections::HashMap;

use super::{
    extract_entities, generate_patterns, CooccurrenceMatrix, CorpusView, EntityVocab, PatternVocab,
};
use crate::error::Result;

/// Entity and pattern vocabularies plus their co-occurrence counts: everything
/// the bootstrapper reads from a corpus.
#[derive(Clone, Debug)]
pub struct CorpusStats {
    pub entities: EntityVocab,
    pub patterns: PatternVocab,
    pub cooc: CooccurrenceMatrix,
}

impl CorpusStats {
    pub fn build(corpus: &CorpusView<'_>, window: usize) -> Result<Self> {
        let entities = extract_entities(corpus);
        let (patterns, cooc) = generate_patterns(corpus, &entities, window)?;
        Ok(Self {
            entities,
            patterns,
            cooc,
        })
    }

    /// Drops entities mentioned fewer than `min_entity` times and patterns
    /// matched fewer than `min_pattern` times (counted before pruning), then
    /// renumbers both vocabularies in their original order. A threshold of 1
    /// keeps everything.
    pub fn prune(&self, min_entity: u32, min_pattern: u64) -> Self {
        if min_entity <= 1 && min_pattern <= 1 {
            return self.clone();
        }
        let mut entities = EntityVocab::default();
        let mut entity_map = HashMap::new();
        for id in self.entities.ids() {
            let form = &self.entities.forms()[id.index()];
            if form.frequency >= min_entity {
                let new = entities.observe(&form.surface);
                for _ in 1..form.frequency {
                    entities.observe(&form.surface);
                }
                entity_map.insert(id, new);
            }
        }
        let mut patterns = PatternVocab::default();
        let mut pattern_map = HashMap::new();
        for id in self.patterns.ids() {
            if self.cooc.pattern_marginal(id) >= min_pattern {
                pattern_map.insert(id, patterns.intern(self.patterns.get(id).clone()));
            }
        }
        let cells = self.cooc.to_map().into_iter().filter_map(|((e, p), c)| {
            Some(((entity_map.get(&e)?.0, pattern_map.get(&p)?.0), c))
        });
        let cooc = CooccurrenceMatrix::from_counts(entities.len(), patterns.len(), cells);
        Self {
            entities,
            patterns,
            cooc,
        }
    }
}
