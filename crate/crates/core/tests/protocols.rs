use std::collections::BTreeMap;

use dgbn::data::{forward_sample, load_csv, make_local_structure_benchmark, HeaderPolicy};
use dgbn::experiments::{sweep_all_nodes_fixed_g, sweep_full_search, COMP};
use dgbn::model::serial::StructureDocument;
use dgbn::model::{DecisionGraph, Domain, GlobalStructure, NetworkStructure, ParameterizedNetwork};
use dgbn::score::{log_score, ScoreConfig};
use dgbn::search::{OperatorSet, SearchConstraints};

/// z has parents x and y; the contexts (x=1, y=0) and (x=0, y=1) share one leaf.
fn shared_leaf_network() -> ParameterizedNetwork {
    let d = Domain::from_cardinalities(&[2, 2, 2]).unwrap();
    let global = GlobalStructure::from_parents(vec![vec![], vec![], vec![0, 1]]);
    // j = x + 2y
    let z = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &[vec![0], vec![1, 2], vec![3]]).unwrap();
    let sets = z.leaf_set_indices(&d, &[0, 1]).unwrap();
    let dz: BTreeMap<_, _> = sets
        .iter()
        .map(|(&leaf, js)| {
            let p1 = match js[0] {
                0 => 0.2,
                3 => 0.95,
                _ => 0.6,
            };
            (leaf, vec![1.0 - p1, p1])
        })
        .collect();
    let s = NetworkStructure { domain: d, global, local: vec![DecisionGraph::single_leaf(0), DecisionGraph::single_leaf(1), z] };
    let root = BTreeMap::from([(0, vec![0.5, 0.5])]);
    ParameterizedNetwork::new(s, vec![root.clone(), root, dz]).unwrap()
}

fn conditional_frequency(ds: &dgbn::model::Dataset, x: usize, y: usize) -> f64 {
    let (mut hit, mut all) = (0usize, 0usize);
    for c in ds.cases().filter(|c| c[0] == x && c[1] == y) {
        all += 1;
        hit += c[2];
    }
    hit as f64 / all as f64
}

#[test]
fn merged_contexts_have_matching_empirical_conditionals() {
    let ds = forward_sample(&shared_leaf_network(), 100_000, 17);
    let a = conditional_frequency(&ds, 0, 1);
    let b = conditional_frequency(&ds, 1, 0);
    assert!((a - b).abs() < 0.03, "{a} vs {b}");
    assert!((a - 0.6).abs() < 0.03);
    assert!((conditional_frequency(&ds, 1, 1) - 0.95).abs() < 0.03);
}

#[test]
fn empirical_leaf_frequencies_converge() {
    let spec = make_local_structure_benchmark(8, 5, 0.5).unwrap();
    let net = &spec.network;
    let ds = forward_sample(net, 100_000, 6);
    for (a, g) in net.structure.local.iter().enumerate() {
        let mut counts: BTreeMap<_, Vec<f64>> = BTreeMap::new();
        for c in ds.cases() {
            let leaf = g.lookup(c).unwrap();
            counts.entry(leaf).or_insert_with(|| vec![0.0; net.domain().cardinality(a)])[c[a]] += 1.0;
        }
        for (leaf, row) in counts {
            let n: f64 = row.iter().sum();
            if n < 2000.0 {
                continue;
            }
            for (k, c) in row.iter().enumerate() {
                let p = net.distributions[a][&leaf][k];
                assert!((c / n - p).abs() < 0.03, "node {a} leaf {leaf} state {k}: {} vs {p}", c / n);
            }
        }
    }
}

fn comp_gap(density: f64, seed: u64) -> f64 {
    let spec = make_local_structure_benchmark(12, seed, density).unwrap();
    let ds = forward_sample(&spec.network, 5000, seed + 100);
    let report = sweep_all_nodes_fixed_g(
        &ds,
        &spec.network.structure.global,
        &[OperatorSet::CBM],
        &[ScoreConfig::uniform()],
    )
    .unwrap();
    report.cell(0, "CBM").unwrap().absolute - report.cell(0, COMP).unwrap().absolute
}

#[test]
fn complete_tables_are_competitive_without_equalities() {
    for seed in [3, 4] {
        let dense = comp_gap(0.0, seed);
        let sparse = comp_gap(0.5, seed);
        assert!(sparse > 0.0);
        assert!(dense < sparse, "seed {seed}: gap {dense} at density 0 vs {sparse} at 0.5");
    }
}

#[test]
fn complete_splits_alone_finish_on_non_binary_domains() {
    let spec = make_local_structure_benchmark(6, 8, 0.5).unwrap();
    assert!(spec.network.domain().cardinalities().iter().any(|&r| r > 2));
    let ds = forward_sample(&spec.network, 300, 9);
    let c = OperatorSet { complete: true, binary: false, merge: false };
    let report = sweep_full_search(
        &ds,
        &[c, OperatorSet::CBM],
        &[ScoreConfig::uniform()],
        &SearchConstraints::default(),
        &GlobalStructure::empty(6),
    )
    .unwrap();
    assert_eq!(report.columns, [COMP, "C", "CBM"]);
}

#[test]
fn saved_structures_rescore_to_reported_values() {
    let spec = make_local_structure_benchmark(7, 2, 0.5).unwrap();
    let ds = forward_sample(&spec.network, 400, 3);
    let priors = [ScoreConfig::uniform(), ScoreConfig::uniform_pn(10.0)];
    let report = sweep_full_search(&ds, &OperatorSet::standard(), &priors, &SearchConstraints::default(), &GlobalStructure::empty(7))
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    report.save(dir.path()).unwrap();
    let mut buf = Vec::new();
    dgbn::data::write_csv(&ds, &mut buf).unwrap();
    std::fs::write(dir.path().join("d.csv"), buf).unwrap();
    let reloaded = load_csv(&dir.path().join("d.csv"), HeaderPolicy::Present).unwrap();
    for (row, cfg) in report.rows.iter().zip(&priors) {
        let min = row.cells.iter().map(|c| c.absolute).fold(f64::INFINITY, f64::min);
        for cell in &row.cells {
            let s = StructureDocument::read(&dir.path().join(&cell.structure)).unwrap().structure().unwrap();
            let data = dgbn::data::align_to(&reloaded, &s.domain).unwrap();
            let v = log_score(&s, &data, cfg).unwrap();
            assert!((v - cell.absolute).abs() <= 1e-9 * v.abs().max(1.0), "{}: {v} vs {}", cell.column, cell.absolute);
            assert_eq!(cell.relative, cell.absolute - min);
        }
    }
}
