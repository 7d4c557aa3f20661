use rayon::prelude::*;

use super::{
    candidate_entities, entity_pretrained, featurize, promote_entities, promote_patterns,
    train_promotion_classifier, ClassifierConfig, FeatureContext, PmiStats, PretrainedVectors,
};
use crate::corpus::CorpusStats;
use crate::embed::{train_inner, EmbeddingTable, TrainConfig};
use crate::error::{Error, Result};
use crate::pools::{init_pools, PoolState, Seeds};

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapConfig {
    /// Outer bootstrapping epochs.
    pub epochs: usize,
    /// Entities promoted per category per epoch.
    pub k_ent: usize,
    /// Patterns promoted per category per epoch.
    pub k_pat: usize,
    /// Maximum pattern length in tokens.
    pub window: usize,
    pub train: TrainConfig,
    pub classifier: ClassifierConfig,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            epochs: 20,
            k_ent: 10,
            k_pat: 10,
            window: 4,
            train: TrainConfig::default(),
            classifier: ClassifierConfig::default(),
            seed: 0,
        }
    }
}

impl BootstrapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_ent == 0 || self.k_pat == 0 {
            return Err(Error::Config("promotion counts must be at least 1".into()));
        }
        if self.window == 0 {
            return Err(Error::Config("window must be at least 1".into()));
        }
        self.train.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    Emboot,
    Epb,
    Lp,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Emboot => "emboot",
            System::Epb => "epb",
            System::Lp => "lp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "emboot" => Some(System::Emboot),
            "epb" => Some(System::Epb),
            "lp" => Some(System::Lp),
            _ => None,
        }
    }
}

/// Pool snapshots, one per epoch; `snapshots[0]` holds the seeds.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub system: System,
    pub snapshots: Vec<PoolState>,
}

impl Trace {
    pub fn last(&self) -> &PoolState {
        self.snapshots.last().expect("trace always holds the seed snapshot")
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub trace: Trace,
    /// Final custom embeddings; `None` for systems that do not train them.
    pub table: Option<EmbeddingTable>,
}

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub(crate) fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Full Emboot run: embeddings, pattern promotion and entity promotion for
/// `config.epochs` epochs.
pub fn run(
    config: &BootstrapConfig,
    stats: &CorpusStats,
    seeds: &Seeds,
    pretrained: &PretrainedVectors,
) -> Result<Outcome> {
    run_with(System::Emboot, config, stats, seeds, pretrained)
}

/// Shared loop for Emboot and EPB. EPB skips embedding training and leaves
/// the custom-cosine features at zero.
pub(crate) fn run_with(
    system: System,
    config: &BootstrapConfig,
    stats: &CorpusStats,
    seeds: &Seeds,
    pretrained: &PretrainedVectors,
) -> Result<Outcome> {
    config.validate()?;
    let custom = match system {
        System::Emboot => true,
        System::Epb => false,
        System::Lp => return Err(Error::Config("label propagation has its own loop".into())),
    };
    let mut pools = init_pools(seeds, &stats.entities)?;
    if pools.n_categories() < 2 {
        return Err(Error::TooFewCategories(pools.n_categories()));
    }
    let cooc = &stats.cooc;
    let mut table = custom.then(|| {
        EmbeddingTable::init(
            cooc.n_entities(),
            cooc.n_patterns(),
            config.train.dim,
            mix_seed(config.seed, 0),
        )
    });
    let entity_vectors = entity_pretrained(&stats.entities, pretrained);
    let mut snapshots = vec![pools.clone()];

    for epoch in 1..=config.epochs {
        if let Some(table) = table.as_mut() {
            let train = TrainConfig {
                seed: mix_seed(config.seed, epoch as u64),
                ..config.train.clone()
            };
            train_inner(table, cooc, &pools, &train).map_err(|e| match e {
                Error::NonFinite { step, .. } => Error::NonFinite { epoch, step },
                other => other,
            })?;
        }

        let pmi = PmiStats::new(cooc, &pools);
        promote_patterns(&mut pools, &pmi, &stats.patterns, epoch, config.k_pat);

        let candidates = candidate_entities(&pools, cooc);
        if !candidates.is_empty() {
            let ctx = FeatureContext {
                pools: &pools,
                cooc,
                entities: &stats.entities,
                pmi: &pmi,
                custom: table.as_ref(),
                pretrained: &entity_vectors,
            };
            let pooled: Vec<_> = (0..pools.n_categories())
                .flat_map(|c| pools.entities(c).iter().map(|x| x.id))
                .collect();
            let training: Vec<_> = pooled.par_iter().map(|&e| (e, featurize(e, &ctx))).collect();
            let model = train_promotion_classifier(&pools, &training, &config.classifier)?;
            let probs: Vec<_> = candidates
                .par_iter()
                .map(|&e| (e, model.predict_proba(&featurize(e, &ctx).0)))
                .collect();
            promote_entities(&mut pools, &probs, &stats.entities, epoch, config.k_ent);
        }
        snapshots.push(pools.clone());
    }
    Ok(Outcome {
        trace: Trace { system, snapshots },
        table,
    })
}
