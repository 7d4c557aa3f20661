use std::collections::HashMap;

use super::{EntityId, PatternId};

/// Sparse entity × pattern match counts, stored both row- and column-wise.
///
/// Only non-zero counts are stored. Rows and columns are sorted by id.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CooccurrenceMatrix {
    rows: Vec<Vec<(PatternId, u32)>>,
    cols: Vec<Vec<(EntityId, u32)>>,
    entity_marginals: Vec<u64>,
    pattern_marginals: Vec<u64>,
    total: u64,
}

impl CooccurrenceMatrix {
    /// Builds the matrix from `(entity, pattern) -> count` entries. Zero
    /// counts are dropped.
    pub fn from_counts(
        n_entities: usize,
        n_patterns: usize,
        counts: impl IntoIterator<Item = ((u32, u32), u32)>,
    ) -> Self {
        let mut rows = vec![Vec::new(); n_entities];
        let mut cols = vec![Vec::new(); n_patterns];
        let mut entity_marginals = vec![0u64; n_entities];
        let mut pattern_marginals = vec![0u64; n_patterns];
        let mut total = 0;
        for ((e, p), c) in counts {
            if c == 0 {
                continue;
            }
            rows[e as usize].push((PatternId(p), c));
            cols[p as usize].push((EntityId(e), c));
            entity_marginals[e as usize] += c as u64;
            pattern_marginals[p as usize] += c as u64;
            total += c as u64;
        }
        rows.iter_mut().for_each(|r| r.sort_unstable());
        cols.iter_mut().for_each(|c| c.sort_unstable());
        Self {
            rows,
            cols,
            entity_marginals,
            pattern_marginals,
            total,
        }
    }

    pub fn n_entities(&self) -> usize {
        self.rows.len()
    }

    pub fn n_patterns(&self) -> usize {
        self.cols.len()
    }

    /// Number of stored (non-zero) cells.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn count(&self, e: EntityId, p: PatternId) -> u32 {
        let row = &self.rows[e.index()];
        row.binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| row[i].1)
            .unwrap_or(0)
    }

    /// Patterns matching `e`, with counts.
    pub fn row(&self, e: EntityId) -> &[(PatternId, u32)] {
        &self.rows[e.index()]
    }

    /// Entities matched by `p`, with counts.
    pub fn col(&self, p: PatternId) -> &[(EntityId, u32)] {
        &self.cols[p.index()]
    }

    pub fn entity_marginal(&self, e: EntityId) -> u64 {
        self.entity_marginals[e.index()]
    }

    pub fn pattern_marginal(&self, p: PatternId) -> u64 {
        self.pattern_marginals[p.index()]
    }

    pub fn pattern_marginals(&self) -> &[u64] {
        &self.pattern_marginals
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// All stored cells as a map, for comparisons in tests and tools.
    pub fn to_map(&self) -> HashMap<(EntityId, PatternId), u32> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(e, row)| row.iter().map(move |&(p, c)| ((EntityId(e as u32), p), c)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn marginals_are_consistent(
            cells in prop::collection::hash_map((0u32..6, 0u32..9), 0u32..5, 0..30)
        ) {
            let m = CooccurrenceMatrix::from_counts(6, 9, cells.clone());
            let sum: u64 = cells.values().map(|&c| c as u64).sum();
            prop_assert_eq!(m.total(), sum);
            let by_entity: u64 = (0..6).map(|e| m.entity_marginal(EntityId(e))).sum();
            let by_pattern: u64 = (0..9).map(|p| m.pattern_marginal(PatternId(p))).sum();
            prop_assert_eq!(by_entity, sum);
            prop_assert_eq!(by_pattern, sum);
            for e in 0..6 {
                let row: u64 = m.row(EntityId(e)).iter().map(|&(_, c)| c as u64).sum();
                prop_assert_eq!(row, m.entity_marginal(EntityId(e)));
                prop_assert!(m.row(EntityId(e)).iter().all(|&(_, c)| c >= 1));
            }
            for (&(e, p), &c) in &cells {
                prop_assert_eq!(m.count(EntityId(e), PatternId(p)), c);
            }
        }
    }
}
