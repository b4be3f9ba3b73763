use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Dataset, ParameterizedNetwork};

/// Draw `n` cases by ancestral sampling. Each node's distribution is the one
/// at the leaf its sampled parents reach; the same seed yields the same data.
pub fn forward_sample(network: &ParameterizedNetwork, n: usize, seed: u64) -> Dataset {
    let s = &network.structure;
    let order = s.global.topological_order().expect("valid network is acyclic");
    let width = s.domain.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(n);
    let mut case = vec![0usize; width];
    for _ in 0..n {
        for &v in &order {
            let p = network.conditional(v, &case).expect("valid network covers every case");
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = p.len() - 1;
            for (k, &pk) in p.iter().enumerate() {
                acc += pk;
                if u < acc {
                    pick = k;
                    break;
                }
            }
            case[v] = pick;
        }
        cases.push(case.clone());
    }
    Dataset::new(s.domain.clone(), cases).expect("sampled codes are in range")
}
