use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SearchConstraints, SearchError};
use crate::model::{Dataset, GlobalStructure};
use crate::score::{table_node_score, ScoreConfig};

/// A single-edge change to the global structure. The derived order breaks ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum EdgeMove {
    Add { from: usize, to: usize },
    Delete { from: usize, to: usize },
    Reverse { from: usize, to: usize },
}

impl fmt::Display for EdgeMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeMove::Add { from, to } => write!(f, "add x{from} -> x{to}"),
            EdgeMove::Delete { from, to } => write!(f, "delete x{from} -> x{to}"),
            EdgeMove::Reverse { from, to } => write!(f, "reverse x{from} -> x{to}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TableOutcome {
    pub global: GlobalStructure,
    pub score: f64,
    pub trace: Vec<f64>,
    pub steps: Vec<EdgeMove>,
}

type Family = (usize, Vec<usize>);

fn with(parents: &[usize], v: usize) -> Vec<usize> {
    let mut p = parents.to_vec();
    p.push(v);
    p.sort_unstable();
    p
}

fn without(parents: &[usize], v: usize) -> Vec<usize> {
    parents.iter().copied().filter(|&p| p != v).collect()
}

/// Families each move rescores, with the move itself.
fn moves(g: &GlobalStructure, constraints: &SearchConstraints, pos: Option<&[usize]>) -> Vec<(EdgeMove, Vec<Family>)> {
    let n = g.len();
    let allowed = |from: usize, to: usize, parents_of_to: usize| {
        pos.is_none_or(|p| p[from] < p[to]) && constraints.max_parents.is_none_or(|m| parents_of_to < m)
    };
    let mut out = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if from == to {
                continue;
            }
            if g.has_edge(from, to) {
                out.push((EdgeMove::Delete { from, to }, vec![(to, without(g.parents(to), from))]));
                if g.can_reverse_edge(from, to) && allowed(to, from, g.parents(from).len()) {
                    out.push((
                        EdgeMove::Reverse { from, to },
                        vec![(to, without(g.parents(to), from)), (from, with(g.parents(from), to))],
                    ));
                }
            } else if !g.has_edge(to, from) && g.can_add_edge(from, to) && allowed(from, to, g.parents(to).len()) {
                out.push((EdgeMove::Add { from, to }, vec![(to, with(g.parents(to), from))]));
            }
        }
    }
    out.sort_by_key(|m| m.0);
    out
}

/// Hill climbing over complete-table structures with edge addition,
/// deletion and reversal, starting from `initial`.
pub fn table_greedy(
    dataset: &Dataset,
    config: &ScoreConfig,
    initial: &GlobalStructure,
    constraints: &SearchConstraints,
) -> Result<TableOutcome, SearchError> {
    config.check()?;
    let n = dataset.domain().len();
    constraints.check(n)?;
    if initial.len() != n || !initial.is_acyclic() {
        return Err(SearchError::Constraints("initial structure must be an acyclic graph over the domain".into()));
    }
    if constraints.fixed_structure {
        let score = (0..n).map(|a| table_node_score(dataset, config, a, initial.parents(a))).sum::<Result<f64, _>>()?;
        return Ok(TableOutcome { global: initial.clone(), score, trace: vec![score], steps: Vec::new() });
    }
    let pos = constraints.positions(n);
    let mut cache: BTreeMap<Family, f64> = BTreeMap::new();
    let fill = |fams: Vec<Family>, cache: &mut BTreeMap<Family, f64>| -> Result<(), SearchError> {
        let missing: Vec<Family> = {
            let mut m: Vec<Family> = fams.into_iter().filter(|f| !cache.contains_key(f)).collect();
            m.sort();
            m.dedup();
            m
        };
        let scored: Vec<(Family, f64)> = missing
            .into_par_iter()
            .map(|f| {
                let s = table_node_score(dataset, config, f.0, &f.1)?;
                Ok((f, s))
            })
            .collect::<Result<_, SearchError>>()?;
        cache.extend(scored);
        Ok(())
    };

    let mut g = initial.clone();
    fill((0..n).map(|a| (a, g.parents(a).to_vec())).collect(), &mut cache)?;
    let current = |g: &GlobalStructure, cache: &BTreeMap<Family, f64>| -> f64 {
        (0..n).map(|a| cache[&(a, g.parents(a).to_vec())]).sum()
    };
    let mut score = current(&g, &cache);
    let mut trace = vec![score];
    let mut steps = Vec::new();
    loop {
        let cands = moves(&g, constraints, pos.as_deref());
        fill(cands.iter().flat_map(|(_, f)| f.iter().cloned()).collect(), &mut cache)?;
        let mut best: Option<(EdgeMove, f64)> = None;
        for (mv, fams) in &cands {
            let delta: f64 = fams.iter().map(|f| cache[f] - cache[&(f.0, g.parents(f.0).to_vec())]).sum();
            if best.is_none_or(|(_, d)| delta > d) {
                best = Some((*mv, delta));
            }
        }
        let Some((mv, delta)) = best else { break };
        if !(delta > 0.0) {
            break;
        }
        match mv {
            EdgeMove::Add { from, to } => g.add_edge(from, to),
            EdgeMove::Delete { from, to } => g.remove_edge(from, to),
            EdgeMove::Reverse { from, to } => {
                g.remove_edge(from, to);
                g.add_edge(to, from);
            }
        }
        debug_assert!(g.is_acyclic());
        score = current(&g, &cache);
        trace.push(score);
        steps.push(mv);
    }
    Ok(TableOutcome { global: g, score, trace, steps })
}
