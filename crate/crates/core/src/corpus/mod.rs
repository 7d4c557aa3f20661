//! Annotated corpora, entity and pattern vocabularies, co-occurrence counts.

mod conll;
mod cooc;
mod pattern;
mod stats;
mod vocab;

use std::collections::HashMap;

pub use conll::{parse_conll, ConllFormat};
pub use cooc::CooccurrenceMatrix;
pub use pattern::{generate_patterns, Pattern, PatternId, PatternVocab, Side, SLOT};
pub use stats::CorpusStats;
pub use vocab::{extract_entities, EntityForm, EntityId, EntityVocab};

use crate::error::{Error, Result};

/// A labelled entity span: tokens `start..end` of sentence `sentence`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mention {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
}

/// Tokenized sentences with entity mentions and their gold categories.
///
/// Training code never sees the labels: it works on a [`CorpusView`], which
/// only carries tokens and spans.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Corpus {
    sentences: Vec<Vec<String>>,
    mentions: Vec<Mention>,
    labels: Vec<String>,
}

impl Corpus {
    /// Builds a corpus, checking span bounds and overlap. Mentions are kept
    /// in (sentence, start) order.
    pub fn new(sentences: Vec<Vec<String>>, mut mentions: Vec<(Mention, String)>) -> Result<Self> {
        mentions.sort_by_key(|(m, _)| (m.sentence, m.start));
        for (i, (m, label)) in mentions.iter().enumerate() {
            let len = sentences
                .get(m.sentence)
                .ok_or_else(|| Error::InvalidMention(format!("sentence {} out of range", m.sentence)))?
                .len();
            if !(m.start < m.end && m.end <= len) {
                return Err(Error::InvalidMention(format!(
                    "span {}..{} in sentence {} of length {len}",
                    m.start, m.end, m.sentence
                )));
            }
            if label.is_empty() {
                return Err(Error::InvalidMention(format!(
                    "empty label for span {}..{} in sentence {}",
                    m.start, m.end, m.sentence
                )));
            }
            if i > 0 {
                let prev = &mentions[i - 1].0;
                if prev.sentence == m.sentence && prev.end > m.start {
                    return Err(Error::InvalidMention(format!(
                        "overlapping spans {}..{} and {}..{} in sentence {}",
                        prev.start, prev.end, m.start, m.end, m.sentence
                    )));
                }
            }
        }
        let (mentions, labels) = mentions.into_iter().unzip();
        Ok(Self {
            sentences,
            mentions,
            labels,
        })
    }

    pub fn sentences(&self) -> &[Vec<String>] {
        &self.sentences
    }

    pub fn mentions(&self) -> &[Mention] {
        &self.mentions
    }

    /// Gold labels, parallel to [`Corpus::mentions`].
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    /// The label-free view used by training.
    pub fn view(&self) -> CorpusView<'_> {
        CorpusView {
            sentences: &self.sentences,
            mentions: &self.mentions,
        }
    }

    /// Gold category per entity surface. A surface annotated with several
    /// categories gets its most frequent one (ties: lexicographically first).
    pub fn gold_labels(&self) -> HashMap<String, String> {
        let mut votes: HashMap<String, HashMap<&str, usize>> = HashMap::new();
        let view = self.view();
        for (m, label) in self.mentions.iter().zip(&self.labels) {
            *votes
                .entry(view.surface(m))
                .or_default()
                .entry(label.as_str())
                .or_default() += 1;
        }
        votes
            .into_iter()
            .map(|(surface, counts)| {
                let best = counts
                    .into_iter()
                    .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
                    .map(|(label, _)| label.to_string())
                    .expect("at least one vote per surface");
                (surface, best)
            })
            .collect()
    }

    /// Serializes in the two-column `token TAG` format with BIO tags.
    pub fn to_conll(&self) -> String {
        let mut tags: Vec<Vec<String>> = self
            .sentences
            .iter()
            .map(|s| vec!["O".to_string(); s.len()])
            .collect();
        for (m, label) in self.mentions.iter().zip(&self.labels) {
            for (k, tag) in tags[m.sentence][m.start..m.end].iter_mut().enumerate() {
                *tag = format!("{}-{label}", if k == 0 { "B" } else { "I" });
            }
        }
        let mut out = String::new();
        for (sentence, tags) in self.sentences.iter().zip(&tags) {
            for (token, tag) in sentence.iter().zip(tags) {
                out.push_str(token);
                out.push(' ');
                out.push_str(tag);
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

/// Tokens and entity spans without gold labels.
#[derive(Clone, Copy, Debug)]
pub struct CorpusView<'a> {
    sentences: &'a [Vec<String>],
    mentions: &'a [Mention],
}

impl<'a> CorpusView<'a> {
    pub fn sentences(&self) -> &'a [Vec<String>] {
        self.sentences
    }

    pub fn mentions(&self) -> &'a [Mention] {
        self.mentions
    }

    pub fn tokens(&self, m: &Mention) -> &'a [String] {
        &self.sentences[m.sentence][m.start..m.end]
    }

    /// Mention tokens joined by single spaces, case preserved.
    pub fn surface(&self, m: &Mention) -> String {
        self.tokens(m).join(" ")
    }
}
