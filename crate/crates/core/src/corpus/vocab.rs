use std::collections::HashMap;
use std::fmt;

use super::CorpusView;

/// Index of an entity in an [`EntityVocab`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntityId(pub u32);

impl EntityId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A distinct entity surface string and its mention count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntityForm {
    pub surface: String,
    pub frequency: u32,
}

/// Distinct entity surfaces, numbered in order of first mention.
#[derive(Clone, Debug, Default)]
pub struct EntityVocab {
    forms: Vec<EntityForm>,
    index: HashMap<String, EntityId>,
}

impl EntityVocab {
    /// Adds one mention of `surface`, returning its id.
    pub fn observe(&mut self, surface: &str) -> EntityId {
        if let Some(&id) = self.index.get(surface) {
            self.forms[id.index()].frequency += 1;
            return id;
        }
        let id = EntityId(self.forms.len() as u32);
        self.forms.push(EntityForm {
            surface: surface.to_string(),
            frequency: 1,
        });
        self.index.insert(surface.to_string(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn id(&self, surface: &str) -> Option<EntityId> {
        self.index.get(surface).copied()
    }

    pub fn surface(&self, id: EntityId) -> &str {
        &self.forms[id.index()].surface
    }

    pub fn frequency(&self, id: EntityId) -> u32 {
        self.forms[id.index()].frequency
    }

    pub fn ids(&self) -> impl Iterator<Item = EntityId> {
        (0..self.forms.len() as u32).map(EntityId)
    }

    pub fn forms(&self) -> &[EntityForm] {
        &self.forms
    }
}

/// Collects the distinct mention surfaces of a corpus with their frequencies.
pub fn extract_entities(corpus: &CorpusView<'_>) -> EntityVocab {
    let mut vocab = EntityVocab::default();
    for m in corpus.mentions() {
        vocab.observe(&corpus.surface(m));
    }
    vocab
}
