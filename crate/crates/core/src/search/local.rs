use std::collections::BTreeMap;

use super::ops::{apply_with_regions, enumerate_with_regions};
use super::{Operator, OperatorSet, SearchError};
use crate::model::{Dataset, DecisionGraph, NodeId, Region, ValueSet};
use crate::score::{leaf_alphas, leaf_log_marginal, ParameterPrior, ScoreConfig};

#[derive(Debug, Clone)]
struct LeafState {
    cases: Vec<u32>,
    counts: Vec<u64>,
    alphas: Vec<f64>,
    score: f64,
}

/// Decision graph of one node together with the per-leaf statistics needed
/// to score candidate operators without touching the rest of the network.
///
/// Split candidates are scored from the cases stored at the split leaf;
/// merges add the two leaves' counts and pool their regions. After an operator
/// is applied every leaf is recounted from the data.
#[derive(Debug, Clone)]
pub struct NodeSearch<'d> {
    dataset: &'d Dataset,
    config: &'d ScoreConfig,
    graph: DecisionGraph,
    leaves: BTreeMap<NodeId, LeafState>,
    regions: BTreeMap<NodeId, Vec<Region>>,
    marginal: f64,
}

impl<'d> NodeSearch<'d> {
    pub fn new(
        dataset: &'d Dataset,
        config: &'d ScoreConfig,
        graph: DecisionGraph,
    ) -> Result<Self, SearchError> {
        let domain = dataset.domain();
        let a = graph.owner();
        let r = domain.cardinality(a);
        let regions = graph.leaf_regions(domain)?;
        let mut leaves: BTreeMap<NodeId, LeafState> = BTreeMap::new();
        for (&leaf, regions) in &regions {
            let alphas = leaf_alphas(config, domain, a, leaf, regions)?;
            leaves.insert(leaf, LeafState { cases: Vec::new(), counts: vec![0; r], alphas, score: 0.0 });
        }
        for (row, case) in dataset.cases().enumerate() {
            let leaf = graph.lookup(case)?;
            let st = leaves.get_mut(&leaf).expect("lookup ends at a leaf");
            st.cases.push(row as u32);
            st.counts[case[a]] += 1;
        }
        let mut marginal = 0.0;
        for st in leaves.values_mut() {
            st.score = leaf_log_marginal(&st.counts, &st.alphas);
            marginal += st.score;
        }
        Ok(NodeSearch { dataset, config, graph, leaves, regions, marginal })
    }

    pub fn graph(&self) -> &DecisionGraph {
        &self.graph
    }

    pub fn into_graph(self) -> DecisionGraph {
        self.graph
    }

    pub fn node(&self) -> usize {
        self.graph.owner()
    }

    /// Node score: log marginal likelihood plus the structure-prior term.
    pub fn score(&self) -> f64 {
        let a = self.node();
        self.marginal + self.config.node_prior(self.graph.leaf_count(), self.dataset.domain().cardinality(a))
    }

    /// Count vectors per leaf, ascending leaf id.
    pub fn leaf_counts(&self) -> BTreeMap<NodeId, Vec<u64>> {
        self.leaves.iter().map(|(&l, st)| (l, st.counts.clone())).collect()
    }

    pub fn operators(&self, parents: &[usize], opset: OperatorSet) -> Vec<Operator> {
        enumerate_with_regions(&self.graph, &self.regions, self.dataset.domain(), parents, opset)
    }

    /// Hyperparameters for a leaf reached through `regions`, built lazily
    /// because the uniform prior ignores them.
    fn alphas_for<F: FnOnce() -> Vec<Region>>(&self, leaf: NodeId, regions: F) -> Result<Vec<f64>, SearchError> {
        let domain = self.dataset.domain();
        match self.config.parameter_prior {
            ParameterPrior::Uniform => Ok(vec![1.0; domain.cardinality(self.node())]),
            _ => Ok(leaf_alphas(self.config, domain, self.node(), leaf, &regions())?),
        }
    }

    fn child_score(&self, leaf: NodeId, var: usize, group: &ValueSet, counts: Vec<u64>) -> Result<f64, SearchError> {
        let r = self.dataset.domain().cardinality(var);
        let alphas = self.alphas_for(leaf, || {
            self.regions[&leaf].iter().filter_map(|reg| reg.restrict(var, group, r)).collect()
        })?;
        Ok(leaf_log_marginal(&counts, &alphas))
    }

    /// Every applicable operator with its score change, in tie-breaking order.
    pub fn evaluate(&self, parents: &[usize], opset: OperatorSet) -> Result<Vec<(Operator, f64)>, SearchError> {
        let domain = self.dataset.domain();
        let a = self.node();
        let r = domain.cardinality(a);
        let ops = self.operators(parents, opset);

        // per (leaf, var): counts of x_a by value of var, and singleton child scores
        let mut tallies: BTreeMap<(NodeId, usize), (Vec<Vec<u64>>, BTreeMap<usize, f64>)> = BTreeMap::new();
        let mut out = Vec::with_capacity(ops.len());
        for op in ops {
            let delta = match op {
                Operator::CompleteSplit { leaf, parent } | Operator::BinarySplit { leaf, parent, .. } => {
                    let st = &self.leaves[&leaf];
                    tallies.entry((leaf, parent)).or_insert_with(|| {
                        let mut table = vec![vec![0u64; r]; domain.cardinality(parent)];
                        for &row in &st.cases {
                            let case = self.dataset.case(row as usize);
                            table[case[parent]][case[a]] += 1;
                        }
                        (table, BTreeMap::new())
                    });
                    let reachable = crate::model::reachable_values(&self.regions[&leaf], parent, domain.cardinality(parent));
                    let mut singles = std::mem::take(&mut tallies.get_mut(&(leaf, parent)).unwrap().1);
                    let table = &tallies[&(leaf, parent)].0;
                    let mut single = |k: usize| -> Result<f64, SearchError> {
                        if let Some(&s) = singles.get(&k) {
                            return Ok(s);
                        }
                        let s = self.child_score(leaf, parent, &ValueSet::singleton(k), table[k].clone())?;
                        singles.insert(k, s);
                        Ok(s)
                    };
                    let (children, total) = match op {
                        Operator::CompleteSplit { .. } => {
                            let mut total = 0.0;
                            for k in reachable.iter() {
                                total += single(k)?;
                            }
                            (reachable.len(), total)
                        }
                        Operator::BinarySplit { state, .. } => {
                            let rest = reachable.without(state);
                            let mut counts = vec![0u64; r];
                            for k in rest.iter() {
                                for (c, n) in counts.iter_mut().zip(&table[k]) {
                                    *c += n;
                                }
                            }
                            let s_rest = self.child_score(leaf, parent, &rest, counts)?;
                            (2, single(state)? + s_rest)
                        }
                        Operator::Merge { .. } => unreachable!(),
                    };
                    tallies.get_mut(&(leaf, parent)).unwrap().1 = singles;
                    total - st.score + self.config.node_prior(children - 1, r)
                }
                Operator::Merge { first, second } => {
                    let (x, y) = (&self.leaves[&first], &self.leaves[&second]);
                    let counts: Vec<u64> = x.counts.iter().zip(&y.counts).map(|(p, q)| p + q).collect();
                    let alphas = self.alphas_for(first, || {
                        self.regions[&first].iter().chain(&self.regions[&second]).cloned().collect()
                    })?;
                    leaf_log_marginal(&counts, &alphas) - x.score - y.score - self.config.node_prior(1, r)
                }
            };
            out.push((op, delta));
        }
        Ok(out)
    }

    /// The best operator; ties go to the earliest in tie-breaking order.
    pub fn best(&self, parents: &[usize], opset: OperatorSet) -> Result<Option<(Operator, f64)>, SearchError> {
        Ok(pick_best(self.evaluate(parents, opset)?))
    }

    /// Apply `op` and recount every leaf from the data.
    pub fn apply(&mut self, parents: &[usize], op: &Operator) -> Result<(), SearchError> {
        let graph = apply_with_regions(&self.graph, &self.regions, self.dataset.domain(), parents, op)?;
        *self = NodeSearch::new(self.dataset, self.config, graph)?;
        Ok(())
    }
}

pub(crate) fn pick_best(cands: Vec<(Operator, f64)>) -> Option<(Operator, f64)> {
    let mut best: Option<(Operator, f64)> = None;
    for (op, d) in cands {
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((op, d));
        }
    }
    best
}

/// Result of a local greedy search in one node.
#[derive(Debug, Clone)]
pub struct LocalOutcome {
    pub graph: DecisionGraph,
    /// Final node score.
    pub score: f64,
    /// Node score before the first step and after every step.
    pub trace: Vec<f64>,
    pub steps: Vec<Operator>,
}

/// Greedy search over decision graphs of node `a` with a fixed parent set:
/// apply the best operator while it strictly improves the score.
pub fn local_greedy(
    a: usize,
    parents: &[usize],
    dataset: &Dataset,
    config: &ScoreConfig,
    opset: OperatorSet,
    initial: DecisionGraph,
) -> Result<LocalOutcome, SearchError> {
    config.check()?;
    if initial.owner() != a {
        return Err(SearchError::Constraints(format!(
            "initial graph belongs to node {}, not {a}",
            initial.owner()
        )));
    }
    let mut parents = parents.to_vec();
    parents.sort_unstable();
    parents.dedup();
    let mut state = NodeSearch::new(dataset, config, initial)?;
    let mut trace = vec![state.score()];
    let mut steps = Vec::new();
    while let Some((op, delta)) = state.best(&parents, opset)? {
        if !(delta > 0.0) {
            break;
        }
        state.apply(&parents, &op)?;
        steps.push(op);
        trace.push(state.score());
    }
    Ok(LocalOutcome { score: state.score(), graph: state.into_graph(), trace, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Domain, GlobalStructure, NetworkStructure};
    use crate::score::{node_score, StructurePrior};

    fn data(cards: &[usize], cases: Vec<Vec<usize>>) -> Dataset {
        Dataset::new(Domain::from_cardinalities(cards).unwrap(), cases).unwrap()
    }

    fn full_node_score(ds: &Dataset, cfg: &ScoreConfig, a: usize, parents: &[usize], g: &DecisionGraph) -> f64 {
        let mut parent_sets = vec![Vec::new(); ds.domain().len()];
        parent_sets[a] = parents.to_vec();
        let mut s = NetworkStructure::empty(ds.domain().clone());
        s.global = GlobalStructure::from_parents(parent_sets);
        s.local[a] = g.clone();
        node_score(ds, &s, cfg, a).unwrap()
    }

    #[test]
    fn fast_deltas_match_full_rescore() {
        let cases: Vec<Vec<usize>> = (0..60).map(|i| vec![i % 3, (i / 3) % 2, (i * 7 + i / 5) % 3]).collect();
        let ds = data(&[3, 2, 3], cases);
        let cfgs = [
            ScoreConfig::uniform(),
            ScoreConfig::uniform_pn(5.0),
            ScoreConfig::uniform().with_structure_prior(StructurePrior::Kappa(0.3)),
        ];
        for cfg in &cfgs {
            let mut st = NodeSearch::new(&ds, cfg, DecisionGraph::single_leaf(2)).unwrap();
            let parents = [0, 1];
            for _ in 0..4 {
                let here = full_node_score(&ds, cfg, 2, &parents, st.graph());
                assert!((here - st.score()).abs() < 1e-9);
                for (op, d) in st.evaluate(&parents, OperatorSet::CBM).unwrap() {
                    let g = crate::search::apply_operator(st.graph(), ds.domain(), &parents, &op).unwrap();
                    let full = full_node_score(&ds, cfg, 2, &parents, &g);
                    assert!((full - here - d).abs() < 1e-9, "{op}: {d} vs {}", full - here);
                }
                let ops = st.operators(&parents, OperatorSet::CBM);
                let pick = ops[ops.len() / 2];
                st.apply(&parents, &pick).unwrap();
            }
        }
    }

    #[test]
    fn independent_child_stays_single_leaf() {
        // x2 independent of x0, x1: every combination appears equally often
        let mut cases = Vec::new();
        for rep in 0..15 {
            for x0 in 0..2 {
                for x1 in 0..2 {
                    for x2 in 0..2 {
                        let _ = rep;
                        cases.push(vec![x0, x1, x2]);
                    }
                }
            }
        }
        let ds = data(&[2, 2, 2], cases);
        let cfg = ScoreConfig::uniform();
        let st = NodeSearch::new(&ds, &cfg, DecisionGraph::single_leaf(2)).unwrap();
        for (op, d) in st.evaluate(&[0, 1], OperatorSet::CBM).unwrap() {
            assert!(d < 0.0, "{op} has delta {d}");
        }
        let out = local_greedy(2, &[0, 1], &ds, &cfg, OperatorSet::CBM, DecisionGraph::single_leaf(2)).unwrap();
        assert_eq!(out.graph.leaf_count(), 1);
    }

    #[test]
    fn copy_of_parent_gets_one_split() {
        let cases: Vec<Vec<usize>> = (0..100).map(|i| vec![(i * 37 / 7) % 2, (i * 37 / 7) % 2]).collect();
        let ds = data(&[2, 2], cases);
        let out = local_greedy(1, &[0], &ds, &ScoreConfig::uniform(), OperatorSet::CBM, DecisionGraph::single_leaf(1))
            .unwrap();
        assert_eq!(out.graph.leaf_count(), 2);
        assert_eq!(out.graph.split_vars().into_iter().collect::<Vec<_>>(), vec![0]);
        assert!(out.trace.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn empty_dataset_changes_nothing() {
        let ds = Dataset::empty(Domain::from_cardinalities(&[3, 3, 2]).unwrap());
        let init = DecisionGraph::complete_tree(2, &[0], ds.domain());
        let out = local_greedy(2, &[0, 1], &ds, &ScoreConfig::uniform(), OperatorSet::CBM, init.clone()).unwrap();
        assert_eq!(out.graph, init);
        assert!(out.steps.is_empty());
    }
}
