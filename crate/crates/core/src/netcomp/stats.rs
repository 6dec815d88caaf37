use std::collections::BTreeMap;

use serde::Serialize;

use crate::molgraph::MoleculeGraph;

use super::{histogram, AtomHistogram};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetStats {
    /// Molecules grouped by sum formula (charge and radicals included), in
    /// histogram order.
    pub isomer_sets: Vec<Vec<usize>>,
    /// Set size -> number of sets of that size.
    pub isomer_set_sizes: BTreeMap<usize, usize>,
    /// Reactions each molecule takes part in, either side, once per reaction.
    pub participation: Vec<usize>,
    /// Participation count -> number of molecules.
    pub participation_histogram: BTreeMap<usize, usize>,
}

/// `reactions` are `(educts, products)` pool indices.
pub fn dataset_stats(molecules: &[MoleculeGraph], reactions: &[(Vec<usize>, Vec<usize>)]) -> DatasetStats {
    let mut groups: BTreeMap<AtomHistogram, Vec<usize>> = BTreeMap::new();
    for (k, g) in molecules.iter().enumerate() {
        groups.entry(histogram(g)).or_default().push(k);
    }
    let isomer_sets: Vec<Vec<usize>> = groups.into_values().collect();
    let mut isomer_set_sizes = BTreeMap::new();
    for s in &isomer_sets {
        *isomer_set_sizes.entry(s.len()).or_insert(0) += 1;
    }
    let mut participation = vec![0; molecules.len()];
    for (left, right) in reactions {
        let mut seen: Vec<usize> = left.iter().chain(right).copied().collect();
        seen.sort_unstable();
        seen.dedup();
        for k in seen {
            participation[k] += 1;
        }
    }
    let mut participation_histogram = BTreeMap::new();
    for &p in &participation {
        *participation_histogram.entry(p).or_insert(0) += 1;
    }
    DatasetStats {
        isomer_sets,
        isomer_set_sizes,
        participation,
        participation_histogram,
    }
}
