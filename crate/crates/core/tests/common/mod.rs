//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use dgbn::model::{Dataset, DecisionGraph, Domain, GlobalStructure, NetworkStructure};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Visit parent states with the first parent varying fastest.
pub fn parent_state(domain: &Domain, parents: &[usize], case: &[usize]) -> usize {
    let mut j = 0;
    let mut stride = 1;
    for &p in parents {
        j += case[p] * stride;
        stride *= domain.cardinality(p);
    }
    j
}

pub fn parent_state_total(domain: &Domain, parents: &[usize]) -> usize {
    parents.iter().map(|&p| domain.cardinality(p)).product()
}

pub fn decode(domain: &Domain, parents: &[usize], mut j: usize) -> Vec<usize> {
    let mut case = vec![0; domain.len()];
    for &p in parents {
        let r = domain.cardinality(p);
        case[p] = j % r;
        j /= r;
    }
    case
}

/// Random partition of `0..q` into nonempty classes.
pub fn random_partition<R: Rng>(rng: &mut R, q: usize) -> Vec<Vec<usize>> {
    let m = rng.random_range(1..=q);
    let mut states: Vec<usize> = (0..q).collect();
    states.shuffle(rng);
    let mut classes = vec![Vec::new(); m];
    for (i, &j) in states.iter().enumerate() {
        let c = if i < m { i } else { rng.random_range(0..m) };
        classes[c].push(j);
    }
    classes
}

/// Random structure over at most `max_vars` variables with merged complete
/// trees, plus uniformly random cases.
pub fn random_instance<R: Rng>(rng: &mut R, max_vars: usize, max_card: usize, max_cases: usize) -> (NetworkStructure, Dataset) {
    let n = rng.random_range(1..=max_vars);
    let cards: Vec<usize> = (0..n).map(|_| rng.random_range(2..=max_card)).collect();
    let domain = Domain::from_cardinalities(&cards).unwrap();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut parents = vec![Vec::new(); n];
    for t in 0..n {
        for &u in &order[..t] {
            if rng.random_bool(0.5) {
                parents[order[t]].push(u);
            }
        }
    }
    let global = GlobalStructure::from_parents(parents);
    let local = (0..n)
        .map(|a| {
            let ps = global.parents(a);
            let q = parent_state_total(&domain, ps);
            DecisionGraph::merge_complete_tree(a, ps, &domain, &random_partition(rng, q)).unwrap()
        })
        .collect();
    let m = rng.random_range(0..=max_cases);
    let cases = (0..m).map(|_| cards.iter().map(|&r| rng.random_range(0..r)).collect()).collect();
    let ds = Dataset::new(domain.clone(), cases).unwrap();
    (NetworkStructure { domain, global, local }, ds)
}

/// Hyperparameters per (node, leaf) by enumerating parent states through lookup.
/// `ess = None` is the uniform prior (one per leaf and state).
pub fn oracle_alphas(s: &NetworkStructure, a: usize, ess: Option<f64>) -> BTreeMap<usize, Vec<f64>> {
    let d = &s.domain;
    let ps = s.parents(a);
    let q = parent_state_total(d, ps);
    let r = d.cardinality(a);
    let mut out: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for j in 0..q {
        let leaf = s.graph(a).lookup(&decode(d, ps, j)).unwrap();
        let e = out.entry(leaf).or_insert_with(|| vec![0.0; r]);
        match ess {
            None => e.iter_mut().for_each(|x| *x = 1.0),
            Some(ess) => e.iter_mut().for_each(|x| *x += ess / (r * q) as f64),
        }
    }
    out
}

/// Log marginal likelihood as a product of one-step-ahead predictive probabilities.
pub fn prequential(s: &NetworkStructure, ds: &Dataset, ess: Option<f64>) -> f64 {
    let n = s.domain.len();
    let alphas: Vec<_> = (0..n).map(|a| oracle_alphas(s, a, ess)).collect();
    let mut counts: Vec<BTreeMap<usize, Vec<f64>>> =
        (0..n).map(|a| alphas[a].keys().map(|&l| (l, vec![0.0; s.domain.cardinality(a)])).collect()).collect();
    let mut total = 0.0;
    for case in ds.cases() {
        for a in 0..n {
            let leaf = s.graph(a).lookup(case).unwrap();
            let al = &alphas[a][&leaf];
            let c = counts[a].get_mut(&leaf).unwrap();
            let num = c[case[a]] + al[case[a]];
            let den: f64 = c.iter().sum::<f64>() + al.iter().sum::<f64>();
            total += (num / den).ln();
            c[case[a]] += 1.0;
        }
    }
    total
}

/// Complete-table node score with per-(j, k) hyperparameters, visiting every j.
pub fn table_score(ds: &Dataset, a: usize, parents: &[usize], ess: Option<f64>) -> f64 {
    let d = ds.domain();
    let q = parent_state_total(d, parents);
    let r = d.cardinality(a);
    let mut n = vec![vec![0u64; r]; q];
    for case in ds.cases() {
        n[parent_state(d, parents, case)][case[a]] += 1;
    }
    let alpha = ess.map_or(1.0, |e| e / (r * q) as f64);
    let mut total = 0.0;
    for row in &n {
        let nj: u64 = row.iter().sum();
        total += ln_gamma(alpha * r as f64) - ln_gamma(nj as f64 + alpha * r as f64);
        for &c in row {
            total += ln_gamma(c as f64 + alpha) - ln_gamma(alpha);
        }
    }
    total
}
