use std::collections::BTreeMap;

use super::{ParameterPrior, ScoreConfig, ScoreError};
use crate::model::{Domain, NetworkStructure, NodeId, ParameterizedNetwork, Region};

/// Dirichlet hyperparameters for every leaf of node `a`.
///
/// Under a prior network the hyperparameter of state `k` at leaf `b` is
/// `ess · Σ p(x_a = k, Par = j)` over the parent states `j` reaching `b`;
/// the uniform-joint variant reduces this to `ess · |preimage| / (r_a q_a)`.
pub fn assign_alphas(
    config: &ScoreConfig,
    structure: &NetworkStructure,
    a: usize,
) -> Result<BTreeMap<NodeId, Vec<f64>>, ScoreError> {
    config.check()?;
    let domain = &structure.domain;
    if let ParameterPrior::PriorNetwork { .. } = config.parameter_prior {
        let size = domain.state_count(structure.parents(a)) * domain.cardinality(a) as f64;
        if size > config.enumeration_limit {
            return Err(ScoreError::EnumerationTooLarge { size, limit: config.enumeration_limit });
        }
    }
    structure
        .graph(a)
        .leaf_regions(domain)?
        .into_iter()
        .map(|(leaf, regions)| Ok((leaf, leaf_alphas(config, domain, a, leaf, &regions)?)))
        .collect()
}

/// Hyperparameters of a single leaf given the regions of parent space that
/// reach it. Regions need only mention the variables split on, so the result
/// does not depend on parents the graph ignores.
pub fn leaf_alphas(
    config: &ScoreConfig,
    domain: &Domain,
    a: usize,
    leaf: NodeId,
    regions: &[Region],
) -> Result<Vec<f64>, ScoreError> {
    let r = domain.cardinality(a);
    let alphas = match &config.parameter_prior {
        ParameterPrior::Uniform => vec![1.0; r],
        ParameterPrior::UniformPriorNetwork { ess } => {
            let mass: f64 = regions.iter().map(|reg| reg.fraction(domain)).sum();
            vec![ess * mass / r as f64; r]
        }
        ParameterPrior::PriorNetwork { network, ess } => {
            if network.domain().cardinalities() != domain.cardinalities() {
                return Err(ScoreError::PriorDomainMismatch);
            }
            let mut joint = vec![0.0; r];
            for reg in regions {
                let p = joint_with_region(network, a, reg, config.enumeration_limit)?;
                for (acc, x) in joint.iter_mut().zip(p) {
                    *acc += x;
                }
            }
            if let Some(state) = joint.iter().position(|&p| p <= 0.0) {
                return Err(ScoreError::ZeroPriorProbability { node: a, leaf, state });
            }
            joint.into_iter().map(|p| ess * p).collect()
        }
    };
    if let Some(state) = alphas.iter().position(|&x| !(x > 0.0)) {
        return Err(ScoreError::NonPositiveAlpha { node: a, leaf, state, value: alphas[state] });
    }
    Ok(alphas)
}

/// `p(x_a = k, region)` for every state `k`, by exact enumeration over the
/// ancestral closure of `a` and the region's variables in the prior network.
fn joint_with_region(
    net: &ParameterizedNetwork,
    a: usize,
    region: &Region,
    limit: f64,
) -> Result<Vec<f64>, ScoreError> {
    let domain = net.domain();
    let global = &net.structure.global;
    let mut needed = vec![false; domain.len()];
    let mut stack: Vec<usize> = std::iter::once(a).chain(region.constraints().iter().map(|(v, _)| *v)).collect();
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut needed[v], true) {
            continue;
        }
        stack.extend(global.parents(v).iter().copied().filter(|&p| !needed[p]));
    }
    let order: Vec<usize> = global
        .topological_order()
        .ok_or(ScoreError::PriorDomainMismatch)?
        .into_iter()
        .filter(|&v| needed[v])
        .collect();
    let allowed: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| region.values(v, domain.cardinality(v)).as_slice().to_vec())
        .collect();
    let size: f64 = allowed.iter().map(|s| s.len() as f64).product();
    if size > limit {
        return Err(ScoreError::EnumerationTooLarge { size, limit });
    }
    let mut out = vec![0.0; domain.cardinality(a)];
    let mut case = vec![0; domain.len()];
    enumerate(net, &order, &allowed, 0, &mut case, 1.0, a, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    net: &ParameterizedNetwork,
    order: &[usize],
    allowed: &[Vec<usize>],
    depth: usize,
    case: &mut [usize],
    weight: f64,
    a: usize,
    out: &mut [f64],
) -> Result<(), ScoreError> {
    if depth == order.len() {
        out[case[a]] += weight;
        return Ok(());
    }
    let v = order[depth];
    let probs = net.conditional(v, case)?.to_vec();
    for &k in &allowed[depth] {
        if probs[k] == 0.0 {
            continue;
        }
        case[v] = k;
        enumerate(net, order, allowed, depth + 1, case, weight * probs[k], a, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DecisionGraph, GlobalStructure, ValueSet};

    fn with_graph(cards: &[usize], parents: Vec<Vec<usize>>, a: usize, g: DecisionGraph) -> NetworkStructure {
        let d = Domain::from_cardinalities(cards).unwrap();
        let mut s = NetworkStructure::empty(d);
        s.global = GlobalStructure::from_parents(parents);
        s.local[a] = g;
        s
    }

    #[test]
    fn upn_complete_tree_binary() {
        let d = Domain::from_cardinalities(&[2, 2]).unwrap();
        let g = DecisionGraph::complete_tree(1, &[0], &d);
        let s = with_graph(&[2, 2], vec![vec![], vec![0]], 1, g);
        let alphas = assign_alphas(&ScoreConfig::uniform_pn(4.0), &s, 1).unwrap();
        for a in alphas.values() {
            assert_eq!(a, &vec![1.0, 1.0]);
        }
    }

    #[test]
    fn upn_merged_leaf_gets_double_mass() {
        let d = Domain::from_cardinalities(&[2, 2, 2]).unwrap();
        let g = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &[vec![0], vec![1, 2], vec![3]])
            .unwrap();
        let merged = g.lookup(&[1, 0, 0]).unwrap();
        let s = with_graph(&[2, 2, 2], vec![vec![], vec![], vec![0, 1]], 2, g);
        let alphas = assign_alphas(&ScoreConfig::uniform_pn(4.0), &s, 2).unwrap();
        for (leaf, a) in &alphas {
            let want = if *leaf == merged { 1.0 } else { 0.5 };
            assert_eq!(a, &vec![want, want]);
        }
    }

    #[test]
    fn uniform_prior_is_all_ones() {
        let d = Domain::from_cardinalities(&[3, 2, 4]).unwrap();
        let g = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &[vec![0, 5], vec![1, 2, 3], vec![4]])
            .unwrap();
        let s = with_graph(&[3, 2, 4], vec![vec![], vec![], vec![0, 1]], 2, g);
        let alphas = assign_alphas(&ScoreConfig::uniform(), &s, 2).unwrap();
        assert!(alphas.values().all(|a| a == &vec![1.0; 4]));
    }

    #[test]
    fn uniform_prior_network_matches_upn_shortcut() {
        let d = Domain::from_cardinalities(&[3, 2, 2]).unwrap();
        let g = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &[vec![0, 4], vec![1, 2, 3], vec![5]])
            .unwrap();
        let s = with_graph(&[3, 2, 2], vec![vec![], vec![], vec![0, 1]], 2, g);
        let pn = ScoreConfig::prior_network(ParameterizedNetwork::uniform(d), 7.0);
        let upn = ScoreConfig::uniform_pn(7.0);
        let a = assign_alphas(&pn, &s, 2).unwrap();
        let b = assign_alphas(&upn, &s, 2).unwrap();
        for (leaf, x) in &a {
            for (p, q) in x.iter().zip(&b[leaf]) {
                assert!((p - q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prior_network_alphas_follow_joint() {
        // prior: x0 -> x1 with p(x0=1)=0.3, p(x1=1|x0=0)=0.2, p(x1=1|x0=1)=0.9
        let d = Domain::from_cardinalities(&[2, 2]).unwrap();
        let mut prior = NetworkStructure::empty(d.clone());
        prior.global = GlobalStructure::from_parents(vec![vec![], vec![0]]);
        let kids = prior.local[1]
            .split_leaf(0, 0, vec![ValueSet::singleton(0), ValueSet::singleton(1)])
            .unwrap();
        let dists = vec![
            BTreeMap::from([(0, vec![0.7, 0.3])]),
            BTreeMap::from([(kids[0], vec![0.8, 0.2]), (kids[1], vec![0.1, 0.9])]),
        ];
        let net = ParameterizedNetwork::new(prior, dists).unwrap();
        // candidate: x1 -> x0, complete tree for x0
        let g = DecisionGraph::complete_tree(0, &[1], &d);
        let s = with_graph(&[2, 2], vec![vec![1], vec![]], 0, g.clone());
        let alphas = assign_alphas(&ScoreConfig::prior_network(net, 10.0), &s, 0).unwrap();
        let leaf_x1_0 = g.lookup(&[0, 0]).unwrap();
        let leaf_x1_1 = g.lookup(&[0, 1]).unwrap();
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        // p(x0=k, x1=0) = (0.56, 0.03); p(x0=k, x1=1) = (0.14, 0.27)
        assert!(close(&alphas[&leaf_x1_0], &[5.6, 0.3]));
        assert!(close(&alphas[&leaf_x1_1], &[1.4, 2.7]));
    }

    #[test]
    fn zero_prior_probability_is_rejected() {
        let d = Domain::from_cardinalities(&[2, 2]).unwrap();
        let prior = NetworkStructure::empty(d.clone());
        let dists = vec![BTreeMap::from([(0, vec![1.0, 0.0])]), BTreeMap::from([(0, vec![0.5, 0.5])])];
        let net = ParameterizedNetwork::new(prior, dists).unwrap();
        let s = NetworkStructure::empty(d);
        let err = assign_alphas(&ScoreConfig::prior_network(net, 1.0), &s, 0).unwrap_err();
        assert!(matches!(err, ScoreError::ZeroPriorProbability { node: 0, state: 1, .. }));
    }

    #[test]
    fn prior_network_guard_refuses_large_parent_sets() {
        let cards = vec![4; 13];
        let d = Domain::from_cardinalities(&cards).unwrap();
        let mut s = NetworkStructure::empty(d.clone());
        s.global = GlobalStructure::from_parents({
            let mut p = vec![Vec::new(); 13];
            p[12] = (0..12).collect();
            p
        });
        let cfg = ScoreConfig::prior_network(ParameterizedNetwork::uniform(d), 1.0);
        assert!(matches!(assign_alphas(&cfg, &s, 12), Err(ScoreError::EnumerationTooLarge { .. })));
    }
}
