use std::collections::{HashMap, HashSet};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::bootstrap::PretrainedVectors;
use crate::corpus::{Corpus, Mention, Pattern};
use crate::error::{Error, Result};
use crate::pools::Seeds;

/// Parameters of the planted-pattern corpus generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct SynthSpec {
    pub categories: usize,
    pub entities_per_category: usize,
    pub patterns_per_category: usize,
    /// Mean mentions per entity; each entity gets `1 + Poisson(mean − 1)`.
    pub mentions_per_entity: f64,
    /// Chance that a mention takes its contexts from another category.
    pub noise_rate: f64,
    pub rng_seed: u64,
    /// Longest planted context, in tokens.
    pub max_context: usize,
    pub seeds_per_category: usize,
    pub pretrained_dim: usize,
    /// Length of the category direction in every word's pretrained vector,
    /// relative to unit-scale noise.
    pub pretrained_signal: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            categories: 4,
            entities_per_category: 250,
            patterns_per_category: 20,
            mentions_per_entity: 5.0,
            noise_rate: 0.1,
            rng_seed: 0,
            max_context: 4,
            seeds_per_category: 10,
            pretrained_dim: 300,
            pretrained_signal: 0.5,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            self.categories,
            self.entities_per_category,
            self.patterns_per_category,
            self.max_context,
            self.seeds_per_category,
            self.pretrained_dim,
        ];
        if counts.contains(&0) {
            return Err(Error::Config("synthetic corpus counts must be at least 1".into()));
        }
        if !(self.mentions_per_entity >= 1.0 && self.mentions_per_entity.is_finite()) {
            return Err(Error::Config("mentions per entity must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return Err(Error::Config("noise rate must lie in [0, 1)".into()));
        }
        if self.noise_rate > 0.0 && self.categories < 2 {
            return Err(Error::Config("noise needs at least two categories".into()));
        }
        if self.seeds_per_category > self.entities_per_category {
            return Err(Error::Config("more seeds than entities per category".into()));
        }
        if !(self.pretrained_signal >= 0.0 && self.pretrained_signal.is_finite()) {
            return Err(Error::Config("pretrained signal must be non-negative".into()));
        }
        Ok(())
    }
}

/// Which category planted each context token and each pattern.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SynthTruth {
    pub categories: Vec<String>,
    /// Planted contexts per category, as full-length patterns.
    pub planted: Vec<Vec<Pattern>>,
    token_category: HashMap<String, usize>,
}

impl SynthTruth {
    /// Category of a pattern whose tokens all come from one category's
    /// planted contexts.
    pub fn pattern_category(&self, pattern: &Pattern) -> Option<usize> {
        let mut cats = pattern.tokens.iter().map(|t| self.token_category.get(t).copied());
        let first = cats.next()??;
        cats.all(|c| c == Some(first)).then_some(first)
    }
}

#[derive(Clone, Debug)]
pub struct SynthOutput {
    pub corpus: Corpus,
    pub truth: SynthTruth,
    pub pretrained: PretrainedVectors,
    /// The most frequent entities of every category.
    pub seeds: Seeds,
}

const NAMES: [&str; 4] = ["PER", "ORG", "LOC", "MISC"];
const ONSETS: [&str; 16] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st"];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

fn category_name(c: usize) -> String {
    NAMES.get(c).map(|s| s.to_string()).unwrap_or_else(|| format!("CAT{c}"))
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(f) => f.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn random_word<R: Rng>(rng: &mut R, syllables: usize) -> String {
    (0..syllables)
        .map(|_| format!("{}{}", ONSETS.choose(rng).unwrap(), VOWELS.choose(rng).unwrap()))
        .collect()
}

/// Generates sentences `[left context] [entity] [right context]`. Each
/// category owns `patterns_per_category` planted contexts with private
/// tokens, alternating left and right, of lengths 1 to `max_context`. Every
/// mention takes one left and one right context, both from its own category
/// or, with probability `noise_rate`, both from one random other category.
/// Entity names are pairs of words from a per-category word list.
pub fn synth_corpus(spec: &SynthSpec) -> Result<SynthOutput> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let k = spec.categories;
    let categories: Vec<String> = (0..k).map(category_name).collect();

    let mut truth = SynthTruth {
        categories: categories.clone(),
        ..SynthTruth::default()
    };
    let mut left: Vec<Vec<Vec<String>>> = vec![Vec::new(); k];
    let mut right: Vec<Vec<Vec<String>>> = vec![Vec::new(); k];
    for c in 0..k {
        let mut planted = Vec::new();
        for j in 0..spec.patterns_per_category {
            let len = 1 + (j / 2) % spec.max_context;
            let tokens: Vec<String> = (0..len).map(|i| format!("{}{j}x{i}", categories[c].to_lowercase())).collect();
            for t in &tokens {
                truth.token_category.insert(t.clone(), c);
            }
            if j % 2 == 0 {
                planted.push(Pattern::left(tokens.clone()));
                left[c].push(tokens);
            } else {
                planted.push(Pattern::right(tokens.clone()));
                right[c].push(tokens);
            }
        }
        truth.planted.push(planted);
    }
    // a category with a single planted context has no right side; borrow its left
    for c in 0..k {
        if right[c].is_empty() {
            right[c] = left[c].clone();
        }
    }

    let per_word = (spec.entities_per_category as f64).sqrt().ceil() as usize + 1;
    let mut used_words = HashSet::new();
    let mut word_category = HashMap::new();
    let mut entities: Vec<(String, usize)> = Vec::new();
    for c in 0..k {
        let mut words = Vec::with_capacity(per_word);
        while words.len() < per_word {
            let w = capitalize(&random_word(&mut rng, 2 + words.len() % 2));
            if used_words.insert(w.clone()) {
                word_category.insert(w.clone(), c);
                words.push(w);
            }
        }
        let mut names = HashSet::new();
        while names.len() < spec.entities_per_category {
            let pair: Vec<&String> = words.choose_multiple(&mut rng, 2).collect();
            let name = format!("{} {}", pair[0], pair[1]);
            if names.insert(name.clone()) {
                entities.push((name, c));
            }
        }
    }

    let extra = Poisson::new(spec.mentions_per_entity - 1.0).ok();
    let pick_category = |rng: &mut ChaCha8Rng, own: usize| {
        if spec.noise_rate > 0.0 && rng.random::<f64>() < spec.noise_rate {
            let other = rng.random_range(0..k - 1);
            if other >= own {
                other + 1
            } else {
                other
            }
        } else {
            own
        }
    };
    let mut sentences: Vec<(Vec<String>, usize, usize, usize)> = Vec::new();
    let mut frequency = vec![0usize; entities.len()];
    for (idx, (name, c)) in entities.iter().enumerate() {
        let n = 1 + extra.map_or(0, |d| d.sample(&mut rng) as usize);
        frequency[idx] = n;
        for _ in 0..n {
            let cc = pick_category(&mut rng, *c);
            let mut tokens = left[cc].choose(&mut rng).unwrap().clone();
            let start = tokens.len();
            tokens.extend(name.split(' ').map(str::to_string));
            let end = tokens.len();
            tokens.extend(right[cc].choose(&mut rng).unwrap().iter().cloned());
            sentences.push((tokens, start, end, *c));
        }
    }
    // interleave entities
    for i in (1..sentences.len()).rev() {
        let j = rng.random_range(0..=i);
        sentences.swap(i, j);
    }
    let mut mentions = Vec::with_capacity(sentences.len());
    let mut tokens = Vec::with_capacity(sentences.len());
    for (s, (toks, start, end, c)) in sentences.into_iter().enumerate() {
        mentions.push((Mention { sentence: s, start, end }, categories[c].clone()));
        tokens.push(toks);
    }
    let corpus = Corpus::new(tokens, mentions)?;

    let mut seeds = Vec::with_capacity(k);
    for (c, name) in categories.iter().enumerate() {
        let mut members: Vec<(usize, &str)> = entities
            .iter()
            .enumerate()
            .filter(|(_, (_, ec))| *ec == c)
            .map(|(i, (s, _))| (frequency[i], s.as_str()))
            .collect();
        members.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)));
        seeds.push((
            name.clone(),
            members[..spec.seeds_per_category].iter().map(|(_, s)| s.to_string()).collect(),
        ));
    }

    let pretrained = pretrained_vectors(spec, &mut rng, &word_category, &truth.token_category)?;
    Ok(SynthOutput {
        corpus,
        truth,
        pretrained,
        seeds: Seeds(seeds),
    })
}

/// Word vectors `signal · μ_c + g`, with a random unit direction `μ_c` per
/// category and Gaussian noise `g` of unit expected norm.
fn pretrained_vectors(
    spec: &SynthSpec,
    rng: &mut ChaCha8Rng,
    entity_words: &HashMap<String, usize>,
    context_words: &HashMap<String, usize>,
) -> Result<PretrainedVectors> {
    let d = spec.pretrained_dim;
    let noise = Normal::new(0.0, 1.0 / (d as f64).sqrt()).expect("positive scale");
    let std_normal = Normal::new(0.0, 1.0).expect("unit scale");
    let directions: Vec<Vec<f64>> = (0..spec.categories)
        .map(|_| {
            let v: Vec<f64> = (0..d).map(|_| std_normal.sample(rng)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / norm).collect()
        })
        .collect();
    let mut words: Vec<(&String, usize)> = entity_words
        .iter()
        .chain(context_words)
        .map(|(w, &c)| (w, c))
        .collect();
    words.sort();
    let mut out = PretrainedVectors::empty(d);
    for (w, c) in words {
        let v = directions[c]
            .iter()
            .map(|m| spec.pretrained_signal * m + noise.sample(rng))
            .collect();
        out.insert(w.clone(), v)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CorpusStats, Side};

    fn small(noise: f64) -> SynthSpec {
        SynthSpec {
            categories: 2,
            entities_per_category: 30,
            patterns_per_category: 6,
            mentions_per_entity: 3.0,
            noise_rate: noise,
            pretrained_dim: 8,
            seeds_per_category: 3,
            rng_seed: 4,
            ..SynthSpec::default()
        }
    }

    #[test]
    fn noiseless_patterns_have_one_category() {
        let out = synth_corpus(&small(0.0)).unwrap();
        let stats = CorpusStats::build(&out.corpus.view(), 4).unwrap();
        let gold = out.corpus.gold_labels();
        for p in stats.patterns.ids() {
            let cats: HashSet<&String> = stats
                .cooc
                .col(p)
                .iter()
                .map(|&(e, _)| &gold[stats.entities.surface(e)])
                .collect();
            assert_eq!(cats.len(), 1, "{}", stats.patterns.rendered(p));
            let planted = out.truth.pattern_category(stats.patterns.get(p)).unwrap();
            assert_eq!(*cats.iter().next().unwrap(), &out.truth.categories[planted]);
        }
    }

    #[test]
    fn same_seed_same_corpus() {
        let a = synth_corpus(&small(0.2)).unwrap();
        let b = synth_corpus(&small(0.2)).unwrap();
        assert_eq!(a.corpus, b.corpus);
        assert_eq!(a.seeds, b.seeds);
        assert_eq!(a.pretrained, b.pretrained);
        let c = synth_corpus(&SynthSpec { rng_seed: 5, ..small(0.2) }).unwrap();
        assert_ne!(a.corpus, c.corpus);
    }

    #[test]
    fn default_spec_mention_count() {
        let out = synth_corpus(&SynthSpec::default()).unwrap();
        let n = out.corpus.mentions().len() as f64;
        assert!((n - 5000.0).abs() <= 250.0, "{n}");
        let names: HashSet<String> = out.corpus.view().mentions().iter().map(|m| out.corpus.view().surface(m)).collect();
        assert_eq!(names.len(), 1000);
        for (_, seeds) in &out.seeds.0 {
            assert_eq!(seeds.len(), 10);
        }
    }

    #[test]
    fn spec_json_uses_camel_case() {
        let spec: SynthSpec = serde_json::from_str(r#"{"categories": 3, "noiseRate": 0.05}"#).unwrap();
        assert_eq!(spec.categories, 3);
        assert_eq!(spec.noise_rate, 0.05);
        assert_eq!(spec.entities_per_category, 250);
        assert!(serde_json::from_str::<SynthSpec>(r#"{"bogus": 1}"#).is_err());
        assert!(SynthSpec { noise_rate: 1.0, ..SynthSpec::default() }.validate().is_err());
    }

    #[test]
    fn vectors_for_every_word() {
        let out = synth_corpus(&small(0.1)).unwrap();
        for s in out.corpus.sentences() {
            for t in s {
                assert!(out.pretrained.get(t).is_some(), "{t}");
            }
        }
        assert_eq!(out.truth.pattern_category(&Pattern { side: Side::Left, tokens: vec!["nope".into()] }), None);
    }
}
