use std::collections::{BTreeMap, HashMap};

use crate::bootstrap::Trace;
use crate::corpus::{CooccurrenceMatrix, EntityId, EntityVocab};
use crate::error::{Error, Result};
use crate::interp::{classify, DecisionList, Prediction};

/// Cumulative promotions (seeds excluded) and their precision after one epoch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub epoch: usize,
    pub throughput: usize,
    /// 1.0 when nothing has been promoted yet.
    pub precision: f64,
}

/// Gold category index, by the trace's category order, of every entity in
/// `gold` (surface → category name). Unknown category names are dropped.
pub fn gold_indices(
    categories: &[String],
    gold: &HashMap<String, String>,
    entities: &EntityVocab,
) -> HashMap<EntityId, usize> {
    entities
        .ids()
        .filter_map(|e| {
            let label = gold.get(entities.surface(e))?;
            Some((e, categories.iter().position(|c| c == label)?))
        })
        .collect()
}

/// One curve point per snapshot of `trace`.
pub fn precision_throughput(
    trace: &Trace,
    gold: &HashMap<String, String>,
    entities: &EntityVocab,
) -> Result<Vec<CurvePoint>> {
    trace
        .snapshots
        .iter()
        .enumerate()
        .map(|(epoch, pools)| {
            let (mut n, mut correct) = (0usize, 0usize);
            for (c, x) in pools.promoted_entities() {
                let surface = entities.surface(x.id);
                let label = gold
                    .get(surface)
                    .ok_or_else(|| Error::MissingGold(surface.to_string()))?;
                n += 1;
                correct += usize::from(*label == pools.categories()[c]);
            }
            Ok(CurvePoint {
                epoch,
                throughput: n,
                precision: if n == 0 { 1.0 } else { correct as f64 / n as f64 },
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionListEval {
    /// Accuracy over the entities that were not abstained on (0 if none).
    pub accuracy: f64,
    pub abstain_rate: f64,
    /// Number of contributing patterns → number of predictions.
    pub histogram: BTreeMap<usize, usize>,
    pub evaluated: usize,
}

impl DecisionListEval {
    /// Fraction of predictions triggered by at most `n` patterns.
    pub fn share_at_most(&self, n: usize) -> f64 {
        let total: usize = self.histogram.values().sum();
        if total == 0 {
            return 0.0;
        }
        self.histogram.range(..=n).map(|(_, v)| v).sum::<usize>() as f64 / total as f64
    }
}

/// Classifies every `(entity, gold category)` with the decision list.
pub fn evaluate_decision_list(
    dl: &DecisionList,
    items: &[(EntityId, usize)],
    cooc: &CooccurrenceMatrix,
) -> DecisionListEval {
    let mut histogram = BTreeMap::new();
    let (mut answered, mut correct) = (0usize, 0usize);
    for &(e, gold) in items {
        let got = classify(e, dl, cooc);
        if let Prediction::Category(c) = got.label {
            answered += 1;
            correct += usize::from(c == gold);
            *histogram.entry(got.contributing).or_insert(0) += 1;
        }
    }
    let n = items.len();
    DecisionListEval {
        accuracy: if answered == 0 { 0.0 } else { correct as f64 / answered as f64 },
        abstain_rate: if n == 0 { 0.0 } else { (n - answered) as f64 / n as f64 },
        histogram,
        evaluated: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bootstrap::System;
    use crate::corpus::PatternId;
    use crate::pools::PoolState;

    fn vocab(n: usize) -> EntityVocab {
        let mut v = EntityVocab::default();
        for i in 0..n {
            v.observe(&format!("e{i}"));
        }
        v
    }

    #[test]
    fn seeds_only_trace() {
        let mut pools = PoolState::new(vec!["A".into(), "B".into()]);
        pools.add_entity(0, EntityId(0), 0, 1.0);
        let trace = Trace {
            system: System::Emboot,
            snapshots: vec![pools],
        };
        let gold = HashMap::from([("e0".to_string(), "A".to_string())]);
        let curve = precision_throughput(&trace, &gold, &vocab(1)).unwrap();
        assert_eq!(curve, vec![CurvePoint { epoch: 0, throughput: 0, precision: 1.0 }]);
    }

    #[test]
    fn forty_promoted_thirty_six_correct() {
        let entities = vocab(40);
        let mut pools = PoolState::new(vec!["A".into(), "B".into()]);
        let seeds = pools.clone();
        let mut gold = HashMap::new();
        for i in 0..40u32 {
            pools.add_entity(0, EntityId(i), 1, 0.5);
            gold.insert(format!("e{i}"), if i < 36 { "A" } else { "B" }.to_string());
        }
        let trace = Trace {
            system: System::Epb,
            snapshots: vec![seeds, pools],
        };
        let curve = precision_throughput(&trace, &gold, &entities).unwrap();
        assert_eq!(curve[1].throughput, 40);
        assert!((curve[1].precision - 0.9).abs() < 1e-15);
        gold.remove("e3");
        assert!(matches!(
            precision_throughput(&trace, &gold, &entities),
            Err(Error::MissingGold(s)) if s == "e3"
        ));
    }

    #[test]
    fn histogram_of_contributing_patterns() {
        let mut pools = PoolState::new(vec!["A".into(), "B".into()]);
        pools.add_entity(0, EntityId(0), 0, 1.0);
        for p in 0..3 {
            pools.add_pattern(0, PatternId(p), 1, 0.0);
        }
        let dl = DecisionList::build_with(&pools, &[], 1, |_| None).unwrap();
        // e0: one pattern, e1: two, e2: one, e3: none
        let cooc = CooccurrenceMatrix::from_counts(
            4,
            3,
            [((0, 0), 1), ((1, 1), 2), ((1, 2), 1), ((2, 2), 1)],
        );
        let items = [(EntityId(0), 0), (EntityId(1), 0), (EntityId(2), 1), (EntityId(3), 0)];
        let eval = evaluate_decision_list(&dl, &items, &cooc);
        assert_eq!(eval.histogram, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(eval.abstain_rate, 0.25);
        assert!((eval.accuracy - 2.0 / 3.0).abs() < 1e-15);
        assert!((eval.share_at_most(1) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_list_abstains_everywhere() {
        let pools = PoolState::new(vec!["A".into(), "B".into()]);
        let dl = DecisionList::build_with(&pools, &[], 0, |_| None).unwrap();
        let cooc = CooccurrenceMatrix::from_counts(2, 1, [((0, 0), 1)]);
        let eval = evaluate_decision_list(&dl, &[(EntityId(0), 0), (EntityId(1), 1)], &cooc);
        assert_eq!(eval.abstain_rate, 1.0);
        assert!(eval.histogram.is_empty());
    }
}
