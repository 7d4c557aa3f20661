use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{EntityId, EntityVocab, PatternId, PatternVocab};
use crate::error::{Error, Result};

/// Something that owns a row of the embedding table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    Entity(EntityId),
    Pattern(PatternId),
}

/// Dense vectors for every entity and every pattern, in one shared space.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    entities: Vec<f64>,
    patterns: Vec<f64>,
}

impl EmbeddingTable {
    pub fn zeros(n_entities: usize, n_patterns: usize, dim: usize) -> Self {
        Self {
            dim,
            entities: vec![0.0; n_entities * dim],
            patterns: vec![0.0; n_patterns * dim],
        }
    }

    /// Components drawn i.i.d. uniform on `[-0.5/dim, 0.5/dim]`, entities
    /// first, then patterns.
    pub fn init(n_entities: usize, n_patterns: usize, dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "embedding dimension must be positive");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = 0.5 / dim as f64;
        let mut t = Self::zeros(n_entities, n_patterns, dim);
        for x in t.entities.iter_mut().chain(t.patterns.iter_mut()) {
            *x = rng.random_range(-r..=r);
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len() / self.dim
    }

    pub fn n_patterns(&self) -> usize {
        self.patterns.len() / self.dim
    }

    pub fn entity(&self, e: EntityId) -> &[f64] {
        let i = e.index() * self.dim;
        &self.entities[i..i + self.dim]
    }

    pub fn entity_mut(&mut self, e: EntityId) -> &mut [f64] {
        let i = e.index() * self.dim;
        &mut self.entities[i..i + self.dim]
    }

    pub fn pattern(&self, p: PatternId) -> &[f64] {
        let i = p.index() * self.dim;
        &self.patterns[i..i + self.dim]
    }

    pub fn pattern_mut(&mut self, p: PatternId) -> &mut [f64] {
        let i = p.index() * self.dim;
        &mut self.patterns[i..i + self.dim]
    }

    pub fn item(&self, item: Item) -> &[f64] {
        match item {
            Item::Entity(e) => self.entity(e),
            Item::Pattern(p) => self.pattern(p),
        }
    }

    pub fn item_mut(&mut self, item: Item) -> &mut [f64] {
        match item {
            Item::Entity(e) => self.entity_mut(e),
            Item::Pattern(p) => self.pattern_mut(p),
        }
    }

    pub fn contains(&self, item: Item) -> bool {
        match item {
            Item::Entity(e) => e.index() < self.n_entities(),
            Item::Pattern(p) => p.index() < self.n_patterns(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entities.iter().chain(&self.patterns).all(|x| x.is_finite())
    }

    /// Writes one row per item: `E:<surface>` or `P:<pattern>`, then the
    /// components with 6 fractional digits, tab separated.
    pub fn write_tsv<W: Write>(
        &self,
        mut out: W,
        entities: &EntityVocab,
        patterns: &PatternVocab,
    ) -> Result<()> {
        for e in entities.ids() {
            write!(out, "E:{}", entities.surface(e))?;
            for x in self.entity(e) {
                write!(out, "\t{x:.6}")?;
            }
            writeln!(out)?;
        }
        for p in patterns.ids() {
            write!(out, "P:{}", patterns.rendered(p))?;
            for x in self.pattern(p) {
                write!(out, "\t{x:.6}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Reads a table written by [`EmbeddingTable::write_tsv`], resolving rows
    /// against the given vocabularies. Every vocabulary item must have a row.
    pub fn read_tsv<R: BufRead>(
        input: R,
        entities: &EntityVocab,
        patterns: &PatternVocab,
    ) -> Result<Self> {
        let mut dim = None;
        let mut ent_rows: Vec<Option<Vec<f64>>> = vec![None; entities.len()];
        let mut pat_rows: Vec<Option<Vec<f64>>> = vec![None; patterns.len()];
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let mut fields = line.split('\t');
            let key = fields.next().unwrap_or_default();
            let values = fields
                .map(|f| f.parse::<f64>().map_err(|e| err(format!("{f:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            match dim {
                None => dim = Some(values.len()),
                Some(d) if d != values.len() => {
                    return Err(err(format!("expected {d} components, found {}", values.len())))
                }
                _ => {}
            }
            if let Some(surface) = key.strip_prefix("E:") {
                let e = entities
                    .id(surface)
                    .ok_or_else(|| err(format!("unknown entity {surface:?}")))?;
                ent_rows[e.index()] = Some(values);
            } else if let Some(rendered) = key.strip_prefix("P:") {
                let p = patterns
                    .id(&rendered.parse()?)
                    .ok_or_else(|| err(format!("unknown pattern {rendered:?}")))?;
                pat_rows[p.index()] = Some(values);
            } else {
                return Err(err(format!("row key {key:?} must start with E: or P:")));
            }
        }
        let dim = dim.ok_or_else(|| Error::Config("embedding file is empty".into()))?;
        let mut t = Self::zeros(entities.len(), patterns.len(), dim);
        for e in entities.ids() {
            let row = ent_rows[e.index()]
                .take()
                .ok_or_else(|| Error::Config(format!("no embedding for entity {:?}", entities.surface(e))))?;
            t.entity_mut(e).copy_from_slice(&row);
        }
        for p in patterns.ids() {
            let row = pat_rows[p.index()]
                .take()
                .ok_or_else(|| Error::Config(format!("no embedding for pattern {:?}", patterns.rendered(p))))?;
            t.pattern_mut(p).copy_from_slice(&row);
        }
        Ok(t)
    }
}
