use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use super::DataError;
use crate::model::{DecisionGraph, Domain, GlobalStructure, NetworkStructure, ParameterizedNetwork};

const MAX_PARENTS: usize = 4;

/// A generative network with parameter-set equalities, and the inputs that produced it.
#[derive(Debug, Clone)]
pub struct GenerativeSpec {
    pub network: ParameterizedNetwork,
    pub seed: u64,
    pub density: f64,
}

#[derive(Serialize, Deserialize)]
struct BenchConfig {
    generator: &'static str,
    seed: u64,
    density: f64,
    variables: usize,
}

impl GenerativeSpec {
    pub fn config(&self) -> serde_json::Value {
        serde_json::to_value(BenchConfig {
            generator: "local-structure-benchmark",
            seed: self.seed,
            density: self.density,
            variables: self.network.domain().len(),
        })
        .expect("plain record")
    }
}

/// Random network over `n_vars` variables with cardinalities in {2, 3, 4}
/// and at most four parents per node. Each node with `q` parent states gets
/// `max(1, ceil(q (1 - density)))` leaves, formed by merging the complete
/// tree along a random partition; leaf distributions are flat-Dirichlet draws.
pub fn make_local_structure_benchmark(n_vars: usize, seed: u64, density: f64) -> Result<GenerativeSpec, DataError> {
    if n_vars < 3 {
        return Err(DataError::TooFewVariables(n_vars));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(DataError::BadDensity(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cards: Vec<usize> = (0..n_vars).map(|_| rng.random_range(2..=4)).collect();
    let domain = Domain::from_cardinalities(&cards)?;

    let mut order: Vec<usize> = (0..n_vars).collect();
    order.shuffle(&mut rng);
    let roots = (n_vars / 6).max(1);
    let mut parents = vec![Vec::new(); n_vars];
    for t in roots..n_vars {
        let k = rng.random_range(1..=MAX_PARENTS.min(t));
        let mut earlier = order[..t].to_vec();
        earlier.shuffle(&mut rng);
        parents[order[t]] = earlier[..k].to_vec();
    }
    let global = GlobalStructure::from_parents(parents);

    let flat = Gamma::new(1.0, 1.0).expect("valid shape");
    let mut local = Vec::with_capacity(n_vars);
    let mut distributions = Vec::with_capacity(n_vars);
    for a in 0..n_vars {
        let ps = global.parents(a);
        let q = domain.state_count(ps) as usize;
        let m = ((q as f64 * (1.0 - density)).ceil() as usize).clamp(1, q);
        let mut states: Vec<usize> = (0..q).collect();
        states.shuffle(&mut rng);
        let mut classes = vec![Vec::new(); m];
        for (i, &j) in states.iter().enumerate() {
            let c = if i < m { i } else { rng.random_range(0..m) };
            classes[c].push(j);
        }
        let graph = if m == q {
            DecisionGraph::complete_tree(a, ps, &domain)
        } else {
            DecisionGraph::merge_complete_tree(a, ps, &domain, &classes)?
        };
        let r = domain.cardinality(a);
        let mut dist = BTreeMap::new();
        for leaf in graph.leaves() {
            let draws: Vec<f64> = (0..r).map(|_| flat.sample(&mut rng)).collect();
            let total: f64 = draws.iter().sum();
            let mut p: Vec<f64> = draws.iter().map(|x| x / total).collect();
            let head: f64 = p[..r - 1].iter().sum();
            p[r - 1] = (1.0 - head).max(0.0);
            dist.insert(leaf, p);
        }
        local.push(graph);
        distributions.push(dist);
    }
    let structure = NetworkStructure { domain, global, local };
    let network = ParameterizedNetwork::new(structure, distributions)?;
    Ok(GenerativeSpec { network, seed, density })
}
