use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Pretrained word vectors, looked up by exact token.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PretrainedVectors {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl PretrainedVectors {
    /// An empty vocabulary; every phrase maps to the zero vector.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vectors: HashMap::new(),
        }
    }

    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        if self.vectors.is_empty() && self.dim == 0 {
            self.dim = vector.len();
        }
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, vector.len()));
        }
        self.vectors.insert(word.into(), vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    /// Mean of the in-vocabulary word vectors; `None` when no word is known.
    pub fn phrase<'a>(&self, words: impl IntoIterator<Item = &'a str>) -> Option<Vec<f64>> {
        let mut sum = vec![0.0; self.dim];
        let mut n = 0usize;
        for w in words {
            if let Some(v) = self.vectors.get(w) {
                sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
                n += 1;
            }
        }
        (n > 0).then(|| sum.into_iter().map(|s| s / n as f64).collect())
    }

    /// Like [`PretrainedVectors::phrase`] but falls back to the zero vector.
    pub fn phrase_or_zero<'a>(&self, words: impl IntoIterator<Item = &'a str>) -> Vec<f64> {
        self.phrase(words).unwrap_or_else(|| vec![0.0; self.dim])
    }

    /// Reads `word v1 v2 ...` rows (tab or space separated). A leading
    /// word2vec-style `count dim` header line is skipped.
    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut out = Self::default();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else { continue };
            let values: Vec<&str> = fields.collect();
            if i == 0 && values.len() == 1 && word.parse::<usize>().is_ok() && values[0].parse::<usize>().is_ok() {
                continue;
            }
            let vector = values
                .iter()
                .map(|v| {
                    v.parse::<f64>().map_err(|e| Error::Parse {
                        line: i + 1,
                        message: format!("{v:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if vector.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("no components for {word:?}"),
                });
            }
            out.insert(word, vector).map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("expected {} components", out.dim),
            })?;
        }
        Ok(out)
    }

    /// Writes one tab-separated row per word, sorted by word.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let mut words: Vec<&String> = self.vectors.keys().collect();
        words.sort();
        for w in words {
            write!(out, "{w}")?;
            for x in &self.vectors[w] {
                write!(out, "\t{x:.6}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
