use std::time::Instant;

use rayon::prelude::*;

use super::report::{SweepReport, COMP};
use crate::model::{Dataset, DecisionGraph, GlobalStructure, NetworkStructure};
use crate::score::{log_score, ScoreConfig};
use crate::search::{combined_greedy, local_greedy, table_greedy, OperatorSet, SearchConstraints, SearchError};

type CellResult = (f64, f64, NetworkStructure);

fn timed<F: FnOnce() -> Result<NetworkStructure, SearchError>>(
    dataset: &Dataset,
    config: &ScoreConfig,
    f: F,
) -> Result<CellResult, SearchError> {
    let start = Instant::now();
    let s = f()?;
    let secs = start.elapsed().as_secs_f64();
    Ok((log_score(&s, dataset, config)?, secs, s))
}

fn run_grid<F>(priors: &[ScoreConfig], columns: usize, cell: F) -> Result<Vec<(String, Vec<CellResult>)>, SearchError>
where
    F: Fn(&ScoreConfig, usize) -> Result<CellResult, SearchError> + Sync,
{
    let flat: Vec<CellResult> = (0..priors.len() * columns)
        .into_par_iter()
        .map(|i| cell(&priors[i / columns], i % columns))
        .collect::<Result<_, _>>()?;
    let mut it = flat.into_iter();
    Ok(priors.iter().map(|p| (p.label(), it.by_ref().take(columns).collect())).collect())
}

fn labels(opsets: &[OperatorSet], comp: bool) -> Vec<String> {
    comp.then(|| COMP.to_string()).into_iter().chain(opsets.iter().map(OperatorSet::to_string)).collect()
}

/// Learn the decision graph of `target` with a fixed parent set from the
/// single-leaf graph, for every (prior, opset). Other nodes stay parentless.
pub fn sweep_static(
    dataset: &Dataset,
    target: usize,
    parents: &[usize],
    opsets: &[OperatorSet],
    priors: &[ScoreConfig],
) -> Result<SweepReport, SearchError> {
    let domain = dataset.domain();
    let mut global = GlobalStructure::empty(domain.len());
    global.set_parents(target, parents.to_vec());
    if !global.is_acyclic() || parents.contains(&target) {
        return Err(SearchError::Constraints(format!("node {target} cannot be its own parent")));
    }
    let results = run_grid(priors, opsets.len(), |cfg, j| {
        timed(dataset, cfg, || {
            let out = local_greedy(target, parents, dataset, cfg, opsets[j], DecisionGraph::single_leaf(target))?;
            let mut s = NetworkStructure::empty(domain.clone());
            s.global = global.clone();
            s.local[target] = out.graph;
            Ok(s)
        })
    })?;
    let title = format!("Static sweep: node {} with {} parents", domain.name(target), parents.len());
    Ok(SweepReport::assemble(title, labels(opsets, false), results))
}

/// Learn every node's decision graph with `global` held fixed; the baseline
/// column scores `global` with complete tables.
pub fn sweep_all_nodes_fixed_g(
    dataset: &Dataset,
    global: &GlobalStructure,
    opsets: &[OperatorSet],
    priors: &[ScoreConfig],
) -> Result<SweepReport, SearchError> {
    let domain = dataset.domain();
    if global.len() != domain.len() || !global.is_acyclic() {
        return Err(SearchError::Constraints("fixed structure must be an acyclic graph over the domain".into()));
    }
    let results = run_grid(priors, opsets.len() + 1, |cfg, j| {
        timed(dataset, cfg, || {
            if j == 0 {
                return Ok(NetworkStructure::complete_tables(domain.clone(), global.clone()));
            }
            let local = (0..domain.len())
                .into_par_iter()
                .map(|a| {
                    local_greedy(a, global.parents(a), dataset, cfg, opsets[j - 1], DecisionGraph::single_leaf(a))
                        .map(|o| o.graph)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(NetworkStructure { domain: domain.clone(), global: global.clone(), local })
        })
    })?;
    Ok(SweepReport::assemble("Fixed global structure".into(), labels(opsets, true), results))
}

/// Full structure search per (prior, opset); the baseline column is greedy
/// search over complete-table structures from `comp_initial`.
pub fn sweep_full_search(
    dataset: &Dataset,
    opsets: &[OperatorSet],
    priors: &[ScoreConfig],
    constraints: &SearchConstraints,
    comp_initial: &GlobalStructure,
) -> Result<SweepReport, SearchError> {
    let domain = dataset.domain();
    let results = run_grid(priors, opsets.len() + 1, |cfg, j| {
        timed(dataset, cfg, || {
            if j == 0 {
                let out = table_greedy(dataset, cfg, comp_initial, constraints)?;
                return Ok(NetworkStructure::complete_tables(domain.clone(), out.global));
            }
            Ok(combined_greedy(dataset, cfg, opsets[j - 1], constraints)?.structure)
        })
    })?;
    let title = if constraints.order.is_some() { "Full search, order constrained" } else { "Full search" };
    Ok(SweepReport::assemble(title.into(), labels(opsets, true), results))
}
