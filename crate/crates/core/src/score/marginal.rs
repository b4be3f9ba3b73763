use std::collections::BTreeMap;

use super::{ln_gamma, node_statistics, LeafStatistics, ParameterPrior, ScoreConfig, ScoreError};
use crate::model::{Dataset, DecisionGraph, NetworkStructure, Region, ValueSet};

/// Log Dirichlet-multinomial marginal likelihood of one leaf:
/// `lnΓ(α) − lnΓ(N + α) + Σ_c [lnΓ(N_c + α_c) − lnΓ(α_c)]`.
pub fn leaf_log_marginal(counts: &[u64], alphas: &[f64]) -> f64 {
    let mut total_alpha = 0.0;
    let mut total_count = 0u64;
    let mut sum = 0.0;
    for (&n, &a) in counts.iter().zip(alphas) {
        total_alpha += a;
        total_count += n;
        if n > 0 {
            sum += ln_gamma(n as f64 + a) - ln_gamma(a);
        }
    }
    if total_count == 0 {
        return 0.0;
    }
    sum + ln_gamma(total_alpha) - ln_gamma(total_count as f64 + total_alpha)
}

/// Sum of [`leaf_log_marginal`] over the leaves of one node.
pub fn node_log_marginal(stats: &LeafStatistics) -> Result<f64, ScoreError> {
    let mut total = 0.0;
    for leaf in &stats.leaves {
        if let Some(state) = leaf.alphas.iter().position(|&a| !(a > 0.0)) {
            return Err(ScoreError::NonPositiveAlpha {
                node: stats.node,
                leaf: leaf.leaf,
                state,
                value: leaf.alphas[state],
            });
        }
        total += leaf_log_marginal(&leaf.counts, &leaf.alphas);
    }
    Ok(total)
}

/// Node `a`'s term of the log score: its log marginal likelihood plus its
/// share of the structure prior.
pub fn node_score(
    dataset: &Dataset,
    structure: &NetworkStructure,
    config: &ScoreConfig,
    a: usize,
) -> Result<f64, ScoreError> {
    let stats = node_statistics(dataset, structure, config, a)?;
    Ok(node_log_marginal(&stats)?
        + config.node_prior(structure.graph(a).leaf_count(), structure.domain.cardinality(a)))
}

/// `ln p(D, B)` up to the normalizing constant shared by every structure.
pub fn log_score(
    structure: &NetworkStructure,
    dataset: &Dataset,
    config: &ScoreConfig,
) -> Result<f64, ScoreError> {
    (0..structure.domain.len()).map(|a| node_score(dataset, structure, config, a)).sum()
}

/// Per-node scores of a current structure, for incremental rescoring.
#[derive(Debug, Clone)]
pub struct ScoreCache<'a> {
    dataset: &'a Dataset,
    config: &'a ScoreConfig,
    structure: NetworkStructure,
    node_scores: Vec<f64>,
}

impl<'a> ScoreCache<'a> {
    pub fn new(
        dataset: &'a Dataset,
        structure: NetworkStructure,
        config: &'a ScoreConfig,
    ) -> Result<Self, ScoreError> {
        let node_scores = (0..structure.domain.len())
            .map(|a| node_score(dataset, &structure, config, a))
            .collect::<Result<_, _>>()?;
        Ok(ScoreCache { dataset, config, structure, node_scores })
    }

    pub fn structure(&self) -> &NetworkStructure {
        &self.structure
    }

    pub fn node_score(&self, a: usize) -> f64 {
        self.node_scores[a]
    }

    pub fn total(&self) -> f64 {
        self.node_scores.iter().sum()
    }

    fn score_with(&self, a: usize, graph: &DecisionGraph) -> Result<f64, ScoreError> {
        let mut s = self.structure.clone();
        s.local[a] = graph.clone();
        node_score(self.dataset, &s, self.config, a)
    }

    /// Change in log score from replacing node `a`'s graph by `graph`.
    pub fn node_score_delta(&self, a: usize, graph: &DecisionGraph) -> Result<f64, ScoreError> {
        if graph == self.structure.graph(a) {
            return Ok(0.0);
        }
        Ok(self.score_with(a, graph)? - self.node_scores[a])
    }

    pub fn replace(&mut self, a: usize, graph: DecisionGraph) -> Result<(), ScoreError> {
        self.node_scores[a] = self.score_with(a, &graph)?;
        self.structure.local[a] = graph;
        Ok(())
    }
}

/// Score of node `a` with a complete table over `parents`. Parent states that
/// never occur contribute nothing, so only observed states are visited.
pub fn table_node_score(
    dataset: &Dataset,
    config: &ScoreConfig,
    a: usize,
    parents: &[usize],
) -> Result<f64, ScoreError> {
    let domain = dataset.domain();
    let r = domain.cardinality(a);
    let mut rows: BTreeMap<Vec<usize>, Vec<u64>> = BTreeMap::new();
    for case in dataset.cases() {
        let key: Vec<usize> = parents.iter().map(|&p| case[p]).collect();
        rows.entry(key).or_insert_with(|| vec![0; r])[case[a]] += 1;
    }
    let q = domain.state_count(parents);
    let mut total = 0.0;
    for (key, counts) in &rows {
        let alphas = match &config.parameter_prior {
            ParameterPrior::Uniform => vec![1.0; r],
            ParameterPrior::UniformPriorNetwork { ess } => vec![ess / (r as f64 * q); r],
            ParameterPrior::PriorNetwork { .. } => {
                let mut region = Region::any();
                for (&p, &k) in parents.iter().zip(key) {
                    region = region
                        .restrict(p, &ValueSet::singleton(k), domain.cardinality(p))
                        .expect("singleton is within range");
                }
                super::leaf_alphas(config, domain, a, 0, &[region])?
            }
        };
        total += leaf_log_marginal(counts, &alphas);
    }
    let leaves = q * (r - 1) as f64;
    let prior = match config.structure_prior {
        super::StructurePrior::Uniform => 0.0,
        super::StructurePrior::Kappa(k) => leaves * k.ln(),
    };
    Ok(total + prior)
}
