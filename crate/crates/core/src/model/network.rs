use std::collections::BTreeMap;
use std::fmt;

use super::{DecisionGraph, Domain, GlobalStructure, ModelError, NodeId};

/// A single breach of a structural invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Cycle,
    WrongGraphCount { expected: usize, found: usize },
    WrongOwner { index: usize, owner: usize },
    ParentOutOfRange { child: usize, parent: usize },
    SelfParent { var: usize },
    MissingRoot { owner: usize, root: NodeId },
    RootHasParent { owner: usize },
    Unreachable { owner: usize, node: NodeId },
    DanglingChild { owner: usize, node: NodeId, child: NodeId },
    CyclicDecisionGraph { owner: usize },
    SelfSplit { owner: usize, node: NodeId },
    SplitOnNonParent { owner: usize, node: NodeId, var: usize },
    EmptySplit { owner: usize, node: NodeId },
    BadEdgeLabel { owner: usize, node: NodeId, child: NodeId },
    OverlappingEdges { owner: usize, node: NodeId },
    NotExhaustive { owner: usize, node: NodeId, var: usize },
    MissingDistribution { owner: usize, leaf: NodeId },
    BadDistribution { owner: usize, leaf: NodeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            Cycle => write!(f, "global structure contains a directed cycle"),
            WrongGraphCount { expected, found } => {
                write!(f, "expected {expected} decision graphs, found {found}")
            }
            WrongOwner { index, owner } => {
                write!(f, "decision graph at position {index} claims owner {owner}")
            }
            ParentOutOfRange { child, parent } => {
                write!(f, "variable {child} lists unknown parent {parent}")
            }
            SelfParent { var } => write!(f, "variable {var} is its own parent"),
            MissingRoot { owner, root } => write!(f, "graph {owner}: root {root} does not exist"),
            RootHasParent { owner } => write!(f, "graph {owner}: root has an incoming edge"),
            Unreachable { owner, node } => write!(f, "graph {owner}: node {node} is unreachable"),
            DanglingChild { owner, node, child } => {
                write!(f, "graph {owner}: node {node} points to missing node {child}")
            }
            CyclicDecisionGraph { owner } => write!(f, "graph {owner}: contains a cycle"),
            SelfSplit { owner, node } => write!(f, "graph {owner}: node {node} splits on its own variable"),
            SplitOnNonParent { owner, node, var } => {
                write!(f, "graph {owner}: node {node} splits on {var}, which is not a parent")
            }
            EmptySplit { owner, node } => write!(f, "graph {owner}: split node {node} has no edges"),
            BadEdgeLabel { owner, node, child } => {
                write!(f, "graph {owner}: edge {node}->{child} has an empty or out-of-range label")
            }
            OverlappingEdges { owner, node } => {
                write!(f, "graph {owner}: node {node} has overlapping edge labels")
            }
            NotExhaustive { owner, node, var } => write!(
                f,
                "graph {owner}: edges of node {node} do not cover the reachable states of {var}"
            ),
            MissingDistribution { owner, leaf } => {
                write!(f, "graph {owner}: leaf {leaf} has no distribution")
            }
            BadDistribution { owner, leaf } => {
                write!(f, "graph {owner}: distribution at leaf {leaf} is not a probability vector")
            }
        }
    }
}

/// Global dag plus one decision graph per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStructure {
    pub domain: Domain,
    pub global: GlobalStructure,
    pub local: Vec<DecisionGraph>,
}

impl NetworkStructure {
    /// No edges, every graph a single leaf.
    pub fn empty(domain: Domain) -> Self {
        let n = domain.len();
        NetworkStructure {
            domain,
            global: GlobalStructure::empty(n),
            local: (0..n).map(DecisionGraph::single_leaf).collect(),
        }
    }

    /// Complete trees in every node of `global`.
    pub fn complete_tables(domain: Domain, global: GlobalStructure) -> Self {
        let local = (0..domain.len())
            .map(|i| DecisionGraph::complete_tree(i, global.parents(i), &domain))
            .collect();
        NetworkStructure { domain, global, local }
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        self.global.parents(i)
    }

    pub fn graph(&self, i: usize) -> &DecisionGraph {
        &self.local[i]
    }

    /// Every invariant breach; an empty list means the structure is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.domain.len();
        let mut out = Vec::new();
        if self.global.len() != n || self.local.len() != n {
            out.push(Violation::WrongGraphCount { expected: n, found: self.local.len().min(self.global.len()) });
            return out;
        }
        for i in 0..n {
            for &p in self.global.parents(i) {
                if p >= n {
                    out.push(Violation::ParentOutOfRange { child: i, parent: p });
                } else if p == i {
                    out.push(Violation::SelfParent { var: i });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        if !self.global.is_acyclic() {
            out.push(Violation::Cycle);
        }
        for (i, g) in self.local.iter().enumerate() {
            if g.owner() != i {
                out.push(Violation::WrongOwner { index: i, owner: g.owner() });
            }
            out.extend(g.violations(&self.domain, self.global.parents(i)));
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<(), ModelError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(v))
        }
    }

    /// Number of free parameters: `Σ leaves · (r − 1)`.
    pub fn parameter_count(&self) -> usize {
        self.local
            .iter()
            .enumerate()
            .map(|(i, g)| g.leaf_count() * (self.domain.cardinality(i) - 1))
            .sum()
    }

    /// Remove every parent that annotates no split node of its child's graph.
    /// The leaf partitions, and hence the score, are unchanged.
    pub fn prune_vacuous_parents(&self) -> NetworkStructure {
        let mut out = self.clone();
        for (i, g) in self.local.iter().enumerate() {
            let used = g.split_vars();
            let kept: Vec<usize> =
                self.global.parents(i).iter().copied().filter(|p| used.contains(p)).collect();
            out.global.set_parents(i, kept);
        }
        out
    }
}

/// A structure with one probability vector per leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterizedNetwork {
    pub structure: NetworkStructure,
    pub distributions: Vec<BTreeMap<NodeId, Vec<f64>>>,
}

impl ParameterizedNetwork {
    pub fn new(
        structure: NetworkStructure,
        distributions: Vec<BTreeMap<NodeId, Vec<f64>>>,
    ) -> Result<Self, ModelError> {
        let net = ParameterizedNetwork { structure, distributions };
        let v = net.validate();
        if v.is_empty() {
            Ok(net)
        } else {
            Err(ModelError::Invalid(v))
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.structure.domain
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.structure.validate();
        if self.distributions.len() != self.structure.local.len() {
            out.push(Violation::WrongGraphCount {
                expected: self.structure.local.len(),
                found: self.distributions.len(),
            });
            return out;
        }
        for (i, g) in self.structure.local.iter().enumerate() {
            let r = self.structure.domain.cardinality(i);
            for leaf in g.leaves() {
                match self.distributions[i].get(&leaf) {
                    None => out.push(Violation::MissingDistribution { owner: i, leaf }),
                    Some(p) => {
                        let sum: f64 = p.iter().sum();
                        if p.len() != r
                            || p.iter().any(|&x| !(x >= 0.0) || !x.is_finite())
                            || (sum - 1.0).abs() > 1e-12
                        {
                            out.push(Violation::BadDistribution { owner: i, leaf });
                        }
                    }
                }
            }
        }
        out
    }

    /// Conditional distribution of `var` given the parent values in `case`.
    pub fn conditional(&self, var: usize, case: &[usize]) -> Result<&[f64], ModelError> {
        let leaf = self.structure.local[var].lookup(case)?;
        self.distributions[var]
            .get(&leaf)
            .map(Vec::as_slice)
            .ok_or(ModelError::Invalid(vec![Violation::MissingDistribution { owner: var, leaf }]))
    }

    /// A network whose every node is an unconditional uniform distribution.
    pub fn uniform(domain: Domain) -> Self {
        let n = domain.len();
        let distributions = (0..n)
            .map(|i| {
                let r = domain.cardinality(i);
                BTreeMap::from([(0, vec![1.0 / r as f64; r])])
            })
            .collect();
        ParameterizedNetwork { structure: NetworkStructure::empty(domain), distributions }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ValueSet;

    fn xyz() -> Domain {
        Domain::new(vec![
            crate::model::Variable::with_cardinality("x", 2),
            crate::model::Variable::with_cardinality("y", 2),
            crate::model::Variable::with_cardinality("z", 2),
        ])
        .unwrap()
    }

    #[test]
    fn v_structure_with_merged_graph_is_valid() {
        let d = xyz();
        let global = GlobalStructure::from_parents(vec![vec![], vec![], vec![0, 1]]);
        let gz = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &[vec![0], vec![1, 2], vec![3]])
            .unwrap();
        let s = NetworkStructure {
            local: vec![DecisionGraph::single_leaf(0), DecisionGraph::single_leaf(1), gz],
            domain: d,
            global,
        };
        assert_eq!(s.validate(), vec![]);
    }

    #[test]
    fn split_on_non_parent_is_reported() {
        let d = xyz();
        let mut gz = DecisionGraph::single_leaf(2);
        gz.split_leaf(0, 1, vec![ValueSet::singleton(0), ValueSet::singleton(1)]).unwrap();
        let s = NetworkStructure {
            local: vec![DecisionGraph::single_leaf(0), DecisionGraph::single_leaf(1), gz],
            domain: d,
            global: GlobalStructure::from_parents(vec![vec![], vec![], vec![0]]),
        };
        let v = s.validate();
        assert!(v.contains(&Violation::SplitOnNonParent { owner: 2, node: 0, var: 1 }));
    }

    #[test]
    fn cycle_is_reported_alongside_other_violations() {
        let d = xyz();
        let mut gy = DecisionGraph::single_leaf(1);
        gy.split_leaf(0, 2, vec![ValueSet::singleton(0), ValueSet::singleton(1)]).unwrap();
        let s = NetworkStructure {
            local: vec![DecisionGraph::single_leaf(0), gy, DecisionGraph::single_leaf(2)],
            domain: d,
            global: GlobalStructure::from_parents(vec![vec![1], vec![0], vec![]]),
        };
        let v = s.validate();
        assert!(v.contains(&Violation::Cycle));
        assert!(v.iter().any(|x| matches!(x, Violation::SplitOnNonParent { owner: 1, .. })));
    }

    #[test]
    fn pruning_drops_unused_parent_only() {
        let d = xyz();
        let mut gz = DecisionGraph::single_leaf(2);
        gz.split_leaf(0, 0, vec![ValueSet::singleton(0), ValueSet::singleton(1)]).unwrap();
        let s = NetworkStructure {
            local: vec![DecisionGraph::single_leaf(0), DecisionGraph::single_leaf(1), gz],
            domain: d,
            global: GlobalStructure::from_parents(vec![vec![], vec![], vec![0, 1]]),
        };
        let p = s.prune_vacuous_parents();
        assert_eq!(p.parents(2), &[0]);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn distribution_sum_checked() {
        let d = xyz();
        let s = NetworkStructure::empty(d);
        let mut dist: Vec<BTreeMap<NodeId, Vec<f64>>> =
            (0..3).map(|_| BTreeMap::from([(0, vec![0.5, 0.5])])).collect();
        dist[1].insert(0, vec![0.5, 0.6]);
        let err = ParameterizedNetwork::new(s, dist).unwrap_err();
        assert!(matches!(err, ModelError::Invalid(v) if v[0] == Violation::BadDistribution { owner: 1, leaf: 0 }));
    }
}
