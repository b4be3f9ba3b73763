use std::collections::BTreeMap;

use thiserror::Error;

use super::{Operator, OperatorSet};
use crate::model::{reachable_values, DecisionGraph, Domain, ModelError, NodeId, Region, ValueSet};

/// Why an operator cannot be applied to a graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Inapplicable {
    #[error("node {0} is not a leaf")]
    NotALeaf(NodeId),
    #[error("variable {0} is not a parent")]
    NotAParent(usize),
    #[error("a graph may not split on its own variable")]
    SelfSplit,
    #[error("only {reachable} state(s) of variable {var} reach leaf {leaf}; the split would not change the constraints")]
    NoChange { leaf: NodeId, var: usize, reachable: usize },
    #[error("state {state} of variable {var} cannot reach leaf {leaf}")]
    UnreachableState { leaf: NodeId, var: usize, state: usize },
    #[error("cannot merge leaf {0} with itself")]
    SameLeaf(NodeId),
    #[error("graph is malformed: {0}")]
    Malformed(String),
}

impl From<ModelError> for Inapplicable {
    fn from(e: ModelError) -> Self {
        Inapplicable::Malformed(e.to_string())
    }
}

/// The groups of parent values a split produces, after checking its
/// preconditions against the regions reaching each leaf.
pub(crate) fn split_groups(
    graph: &DecisionGraph,
    regions: &BTreeMap<NodeId, Vec<Region>>,
    domain: &Domain,
    parents: &[usize],
    op: &Operator,
) -> Result<Option<(usize, Vec<ValueSet>)>, Inapplicable> {
    let (leaf, var, state) = match *op {
        Operator::CompleteSplit { leaf, parent } => (leaf, parent, None),
        Operator::BinarySplit { leaf, parent, state } => (leaf, parent, Some(state)),
        Operator::Merge { .. } => return Ok(None),
    };
    if !graph.is_leaf(leaf) {
        return Err(Inapplicable::NotALeaf(leaf));
    }
    if var == graph.owner() {
        return Err(Inapplicable::SelfSplit);
    }
    if parents.binary_search(&var).is_err() {
        return Err(Inapplicable::NotAParent(var));
    }
    let reachable = reachable_values(&regions[&leaf], var, domain.cardinality(var));
    if reachable.len() < 2 {
        return Err(Inapplicable::NoChange { leaf, var, reachable: reachable.len() });
    }
    let groups = match state {
        None => reachable.iter().map(ValueSet::singleton).collect(),
        Some(k) => {
            if !reachable.contains(k) {
                return Err(Inapplicable::UnreachableState { leaf, var, state: k });
            }
            vec![ValueSet::singleton(k), reachable.without(k)]
        }
    };
    Ok(Some((var, groups)))
}

pub(crate) fn apply_with_regions(
    graph: &DecisionGraph,
    regions: &BTreeMap<NodeId, Vec<Region>>,
    domain: &Domain,
    parents: &[usize],
    op: &Operator,
) -> Result<DecisionGraph, Inapplicable> {
    let mut out = graph.clone();
    match split_groups(graph, regions, domain, parents, op)? {
        Some((var, groups)) => {
            let leaf = match *op {
                Operator::CompleteSplit { leaf, .. } | Operator::BinarySplit { leaf, .. } => leaf,
                Operator::Merge { .. } => unreachable!(),
            };
            out.split_leaf(leaf, var, groups)?;
        }
        None => {
            let Operator::Merge { first, second } = *op else { unreachable!() };
            if first == second {
                return Err(Inapplicable::SameLeaf(first));
            }
            for leaf in [first, second] {
                if !graph.is_leaf(leaf) {
                    return Err(Inapplicable::NotALeaf(leaf));
                }
            }
            out.merge_leaves(first, second)?;
        }
    }
    Ok(out)
}

/// Apply `op` to `graph` for a node with the given (sorted) parent set.
pub fn apply_operator(
    graph: &DecisionGraph,
    domain: &Domain,
    parents: &[usize],
    op: &Operator,
) -> Result<DecisionGraph, Inapplicable> {
    let regions = graph.leaf_regions(domain)?;
    apply_with_regions(graph, &regions, domain, parents, op)
}

pub fn apply_complete_split(
    graph: &DecisionGraph,
    domain: &Domain,
    parents: &[usize],
    leaf: NodeId,
    parent: usize,
) -> Result<DecisionGraph, Inapplicable> {
    apply_operator(graph, domain, parents, &Operator::CompleteSplit { leaf, parent })
}

pub fn apply_binary_split(
    graph: &DecisionGraph,
    domain: &Domain,
    parents: &[usize],
    leaf: NodeId,
    parent: usize,
    state: usize,
) -> Result<DecisionGraph, Inapplicable> {
    apply_operator(graph, domain, parents, &Operator::BinarySplit { leaf, parent, state })
}

pub fn apply_merge(
    graph: &DecisionGraph,
    domain: &Domain,
    first: NodeId,
    second: NodeId,
) -> Result<DecisionGraph, Inapplicable> {
    let (first, second) = (first.min(second), first.max(second));
    apply_operator(graph, domain, &[], &Operator::Merge { first, second })
}

pub(crate) fn enumerate_with_regions(
    graph: &DecisionGraph,
    regions: &BTreeMap<NodeId, Vec<Region>>,
    domain: &Domain,
    parents: &[usize],
    opset: OperatorSet,
) -> Vec<Operator> {
    let leaves = graph.leaves();
    let owner = graph.owner();
    let mut complete = Vec::new();
    let mut binary = Vec::new();
    for &leaf in &leaves {
        for &parent in parents.iter().filter(|&&p| p != owner) {
            let reachable = reachable_values(&regions[&leaf], parent, domain.cardinality(parent));
            if reachable.len() < 2 {
                continue;
            }
            if opset.complete {
                complete.push(Operator::CompleteSplit { leaf, parent });
            }
            if opset.binary {
                binary.extend(reachable.iter().map(|state| Operator::BinarySplit { leaf, parent, state }));
            }
        }
    }
    let mut out = complete;
    out.append(&mut binary);
    if opset.merge {
        for (i, &first) in leaves.iter().enumerate() {
            for &second in &leaves[i + 1..] {
                out.push(Operator::Merge { first, second });
            }
        }
    }
    out
}

/// Every applicable operator in `opset`, in tie-breaking order.
pub fn enumerate_operators(
    graph: &DecisionGraph,
    domain: &Domain,
    parents: &[usize],
    opset: OperatorSet,
) -> Result<Vec<Operator>, ModelError> {
    let regions = graph.leaf_regions(domain)?;
    Ok(enumerate_with_regions(graph, &regions, domain, parents, opset))
}
