use std::collections::BTreeMap;

use super::{assign_alphas, ScoreConfig, ScoreError};
use crate::model::{Dataset, ModelError, NetworkStructure, NodeId};

/// Counts and hyperparameters of one leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafStats {
    pub leaf: NodeId,
    pub counts: Vec<u64>,
    pub alphas: Vec<f64>,
}

impl LeafStats {
    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn total_alpha(&self) -> f64 {
        self.alphas.iter().sum()
    }
}

/// Per-leaf statistics of one node, in ascending leaf order.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafStatistics {
    pub node: usize,
    pub leaves: Vec<LeafStats>,
}

impl LeafStatistics {
    pub fn total_count(&self) -> u64 {
        self.leaves.iter().map(LeafStats::total_count).sum()
    }
}

/// Tally, for every leaf of node `a`'s graph, how often each of its states
/// occurs among the cases reaching that leaf.
pub fn accumulate_counts(
    dataset: &Dataset,
    structure: &NetworkStructure,
    a: usize,
) -> Result<BTreeMap<NodeId, Vec<u64>>, ModelError> {
    let graph = structure.graph(a);
    let r = structure.domain.cardinality(a);
    let mut counts: BTreeMap<NodeId, Vec<u64>> =
        graph.leaves().into_iter().map(|l| (l, vec![0; r])).collect();
    for case in dataset.cases() {
        let leaf = graph.lookup(case)?;
        counts.get_mut(&leaf).ok_or(ModelError::NotALeaf(leaf))?[case[a]] += 1;
    }
    Ok(counts)
}

/// Counts and hyperparameters for node `a`.
pub fn node_statistics(
    dataset: &Dataset,
    structure: &NetworkStructure,
    config: &ScoreConfig,
    a: usize,
) -> Result<LeafStatistics, ScoreError> {
    let counts = accumulate_counts(dataset, structure, a)?;
    let mut alphas = assign_alphas(config, structure, a)?;
    let leaves = counts
        .into_iter()
        .map(|(leaf, counts)| LeafStats {
            leaf,
            counts,
            alphas: alphas.remove(&leaf).expect("same leaf set"),
        })
        .collect();
    Ok(LeafStatistics { node: a, leaves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DecisionGraph, Domain, GlobalStructure};

    fn fig3_structure() -> NetworkStructure {
        let d = Domain::from_cardinalities(&[2, 2, 2]).unwrap();
        let gz = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &[vec![0], vec![1, 2], vec![3]])
            .unwrap();
        NetworkStructure {
            local: vec![DecisionGraph::single_leaf(0), DecisionGraph::single_leaf(1), gz],
            global: GlobalStructure::from_parents(vec![vec![], vec![], vec![0, 1]]),
            domain: d,
        }
    }

    #[test]
    fn both_mismatched_contexts_land_in_merged_leaf() {
        let s = fig3_structure();
        let data = Dataset::new(s.domain.clone(), vec![vec![0, 1, 1], vec![1, 0, 0]]).unwrap();
        let counts = accumulate_counts(&data, &s, 2).unwrap();
        let merged = s.graph(2).lookup(&[0, 1, 0]).unwrap();
        for (leaf, c) in &counts {
            if *leaf == merged {
                assert_eq!(c, &vec![1, 1]);
            } else {
                assert_eq!(c, &vec![0, 0]);
            }
        }
    }

    #[test]
    fn empty_dataset_gives_zero_counts() {
        let s = fig3_structure();
        let data = Dataset::empty(s.domain.clone());
        let counts = accumulate_counts(&data, &s, 2).unwrap();
        assert_eq!(counts.len(), 3);
        assert!(counts.values().all(|c| c.iter().all(|&n| n == 0)));
    }

    #[test]
    fn single_leaf_counts_are_marginal_tallies() {
        let d = Domain::from_cardinalities(&[3, 2]).unwrap();
        let cases: Vec<Vec<usize>> = (0..1000).map(|i| vec![(i * 7 + i / 3) % 3, i % 2]).collect();
        let mut tally = [0u64; 3];
        for c in &cases {
            tally[c[0]] += 1;
        }
        let data = Dataset::new(d.clone(), cases).unwrap();
        let s = NetworkStructure::empty(d);
        let counts = accumulate_counts(&data, &s, 0).unwrap();
        assert_eq!(counts[&0], tally.to_vec());
    }
}
