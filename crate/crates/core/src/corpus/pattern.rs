use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::{CooccurrenceMatrix, CorpusView, EntityVocab};
use crate::error::{Error, Result};

/// Slot marker standing in for the entity in a rendered pattern.
pub const SLOT: &str = "@ENTITY";

/// Which side of the entity a pattern's tokens sit on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// A one-sided n-gram context of an entity mention.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub side: Side,
    pub tokens: Vec<String>,
}

impl Pattern {
    pub fn left<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Self {
        Self {
            side: Side::Left,
            tokens: tokens.into_iter().map(Into::into).collect(),
        }
    }

    pub fn right<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Self {
        Self {
            side: Side::Right,
            tokens: tokens.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.tokens.join(" ");
        match self.side {
            Side::Left => write!(f, "{body} {SLOT}"),
            Side::Right => write!(f, "{SLOT} {body}"),
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let bad = |why: &str| Error::Parse {
            line: 0,
            message: format!("pattern {s:?}: {why}"),
        };
        if tokens.len() < 2 {
            return Err(bad("needs the slot and at least one token"));
        }
        let pattern = if tokens[0] == SLOT {
            Pattern::right(tokens[1..].iter().copied())
        } else if tokens[tokens.len() - 1] == SLOT {
            Pattern::left(tokens[..tokens.len() - 1].iter().copied())
        } else {
            return Err(bad("slot must be first or last"));
        };
        Ok(pattern)
    }
}

/// Index of a pattern in a [`PatternVocab`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternId(pub u32);

impl PatternId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Distinct patterns, numbered in order of first emission, with their
/// rendered strings cached.
#[derive(Clone, Debug, Default)]
pub struct PatternVocab {
    patterns: Vec<Pattern>,
    rendered: Vec<String>,
    index: HashMap<Pattern, PatternId>,
}

impl PatternVocab {
    pub fn intern(&mut self, pattern: Pattern) -> PatternId {
        if let Some(&id) = self.index.get(&pattern) {
            return id;
        }
        let id = PatternId(self.patterns.len() as u32);
        self.rendered.push(pattern.to_string());
        self.index.insert(pattern.clone(), id);
        self.patterns.push(pattern);
        id
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn id(&self, pattern: &Pattern) -> Option<PatternId> {
        self.index.get(pattern).copied()
    }

    pub fn get(&self, id: PatternId) -> &Pattern {
        &self.patterns[id.index()]
    }

    pub fn rendered(&self, id: PatternId) -> &str {
        &self.rendered[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = PatternId> {
        (0..self.patterns.len() as u32).map(PatternId)
    }
}

/// Emits every one-sided context n-gram (length 1..=`window`) around every
/// mention and counts entity/pattern matches.
///
/// Patterns stay inside their sentence. Tokens of a neighbouring mention are
/// taken literally.
pub fn generate_patterns(
    corpus: &CorpusView<'_>,
    entities: &EntityVocab,
    window: usize,
) -> Result<(PatternVocab, CooccurrenceMatrix)> {
    if window == 0 {
        return Err(Error::Config("pattern window must be at least 1".into()));
    }
    let mut vocab = PatternVocab::default();
    let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
    for m in corpus.mentions() {
        let entity = entities
            .id(&corpus.surface(m))
            .ok_or_else(|| Error::Config(format!("mention {:?} missing from entity vocabulary", corpus.surface(m))))?;
        let sentence = &corpus.sentences()[m.sentence];
        for n in 1..=window.min(m.start) {
            let id = vocab.intern(Pattern::left(sentence[m.start - n..m.start].iter().cloned()));
            *counts.entry((entity.0, id.0)).or_default() += 1;
        }
        for n in 1..=window.min(sentence.len() - m.end) {
            let id = vocab.intern(Pattern::right(sentence[m.end..m.end + n].iter().cloned()));
            *counts.entry((entity.0, id.0)).or_default() += 1;
        }
    }
    let cooc = CooccurrenceMatrix::from_counts(entities.len(), vocab.len(), counts);
    Ok((vocab, cooc))
}
