use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::local::NodeSearch;
use super::{Operator, OperatorSet, SearchConstraints, SearchError};
use crate::model::{Dataset, NetworkStructure};
use crate::score::ScoreConfig;

/// One applied operator of the combined search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchStep {
    pub node: usize,
    pub operator: Operator,
    /// Edge `added_parent -> node` introduced by this step.
    pub added_parent: Option<usize>,
    pub delta: f64,
    /// Total score after the step.
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub structure: NetworkStructure,
    pub score: f64,
    /// Total score before the first step and after every step.
    pub trace: Vec<f64>,
    pub steps: Vec<SearchStep>,
}

#[derive(Debug, Clone, Default)]
struct NodeCache {
    splits: BTreeMap<usize, Option<(Operator, f64)>>,
    merge: Option<(Operator, f64)>,
}

/// Parents node `a` may use this round: its current parents plus every
/// eligible non-descendant, filled in ascending index up to the cap.
fn candidate_parents(
    structure: &NetworkStructure,
    constraints: &SearchConstraints,
    positions: Option<&[usize]>,
    a: usize,
) -> Vec<usize> {
    let mut out = structure.parents(a).to_vec();
    if constraints.fixed_structure {
        return out;
    }
    let desc = structure.global.descendants(a);
    for v in 0..structure.domain.len() {
        if constraints.max_parents.is_some_and(|m| out.len() >= m) {
            break;
        }
        if desc[v] || structure.global.has_edge(v, a) {
            continue;
        }
        if positions.is_some_and(|pos| pos[v] > pos[a]) {
            continue;
        }
        out.push(v);
    }
    out.sort_unstable();
    out
}

/// Greedy search over global and local structure from the edgeless network.
pub fn combined_greedy(
    dataset: &Dataset,
    config: &ScoreConfig,
    opset: OperatorSet,
    constraints: &SearchConstraints,
) -> Result<SearchOutcome, SearchError> {
    combined_greedy_from(NetworkStructure::empty(dataset.domain().clone()), dataset, config, opset, constraints)
}

/// Greedy search starting from `initial`. Every round each node is offered
/// all eligible non-descendants as temporary parents, the single best
/// operator over all nodes is applied if it strictly improves the score, and
/// a split on a temporary parent makes that parent permanent.
pub fn combined_greedy_from(
    initial: NetworkStructure,
    dataset: &Dataset,
    config: &ScoreConfig,
    opset: OperatorSet,
    constraints: &SearchConstraints,
) -> Result<SearchOutcome, SearchError> {
    config.check()?;
    let n = dataset.domain().len();
    constraints.check(n)?;
    if initial.domain != *dataset.domain() {
        return Err(SearchError::Constraints("initial structure and dataset have different domains".into()));
    }
    initial.ensure_valid()?;
    let positions = constraints.positions(n);
    for a in 0..n {
        let ps = initial.parents(a);
        if let Some(pos) = &positions {
            if ps.iter().any(|&p| pos[p] > pos[a]) {
                return Err(SearchError::Constraints(format!("initial parents of node {a} violate the order")));
            }
        }
        if constraints.max_parents.is_some_and(|m| ps.len() > m) {
            return Err(SearchError::Constraints(format!("node {a} starts above the parent cap")));
        }
    }

    let mut structure = initial;
    let mut nodes: Vec<NodeSearch> = (0..n)
        .into_par_iter()
        .map(|a| NodeSearch::new(dataset, config, structure.local[a].clone()))
        .collect::<Result<_, _>>()?;
    let mut total: f64 = nodes.iter().map(NodeSearch::score).sum();
    let mut trace = vec![total];
    let mut steps = Vec::new();
    let splits = OperatorSet { merge: false, ..opset };
    let merges = OperatorSet { complete: false, binary: false, merge: true };
    // per node: best split per candidate parent and best merge, valid for the current graph
    let mut cache: Vec<Option<NodeCache>> = vec![None; n];

    loop {
        let cands: Vec<Vec<usize>> =
            (0..n).map(|a| candidate_parents(&structure, constraints, positions.as_deref(), a)).collect();
        let work: Vec<(usize, Option<usize>)> = (0..n)
            .flat_map(|a| {
                let known = cache[a].as_ref();
                let mut items: Vec<(usize, Option<usize>)> = Vec::new();
                if opset.merge && known.is_none() {
                    items.push((a, None));
                }
                if splits.complete || splits.binary {
                    for &p in &cands[a] {
                        if known.is_none_or(|c| !c.splits.contains_key(&p)) {
                            items.push((a, Some(p)));
                        }
                    }
                }
                items
            })
            .collect();
        let fresh: Vec<((usize, Option<usize>), Option<(Operator, f64)>)> = work
            .par_iter()
            .map(|&(a, p)| {
                let best = match p {
                    Some(p) => nodes[a].best(&[p], splits)?,
                    None => nodes[a].best(&[], merges)?,
                };
                Ok(((a, p), best))
            })
            .collect::<Result<_, SearchError>>()?;
        for ((a, p), best) in fresh {
            let entry = cache[a].get_or_insert_with(NodeCache::default);
            match p {
                Some(p) => {
                    entry.splits.insert(p, best);
                }
                None => entry.merge = best,
            }
        }

        let mut chosen: Option<(usize, Operator, f64)> = None;
        for a in 0..n {
            let Some(entry) = &cache[a] else { continue };
            let node_best = cands[a]
                .iter()
                .filter_map(|p| entry.splits.get(p).copied().flatten())
                .chain(entry.merge)
                .fold(None, |acc: Option<(Operator, f64)>, (op, d)| match acc {
                    Some((bo, bd)) if bd > d || (bd == d && bo < op) => acc,
                    _ => Some((op, d)),
                });
            if let Some((op, d)) = node_best {
                if chosen.is_none_or(|(_, _, bd)| d > bd) {
                    chosen = Some((a, op, d));
                }
            }
        }
        let Some((a, op, delta)) = chosen else { break };
        if !(delta > 0.0) {
            break;
        }

        let added = op.split_var().filter(|&v| !structure.global.has_edge(v, a));
        if let Some(v) = added {
            structure.global.add_edge(v, a);
        }
        let parents = structure.parents(a).to_vec();
        nodes[a].apply(&parents, &op)?;
        structure.local[a] = nodes[a].graph().clone();
        debug_assert!(structure.global.is_acyclic());
        cache[a] = None;
        total = nodes.iter().map(NodeSearch::score).sum();
        trace.push(total);
        steps.push(SearchStep { node: a, operator: op, added_parent: added, delta, score: total });
    }

    Ok(SearchOutcome { structure, score: total, trace, steps })
}
