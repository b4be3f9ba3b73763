//! Decision graphs: rooted dags of split nodes whose leaves hold distinct
//! parameter sets. Leaves may have several parents, which is how equality
//! constraints between parent states are expressed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Domain, ModelError, Violation};

/// Node identifier inside one decision graph. Leaves are identified by the id
/// of their node; ids are stable and never reused.
pub type NodeId = usize;

/// A sorted, duplicate-free set of states of one variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct ValueSet(Vec<usize>);

impl From<Vec<usize>> for ValueSet {
    fn from(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        ValueSet(v)
    }
}

impl From<ValueSet> for Vec<usize> {
    fn from(v: ValueSet) -> Self {
        v.0
    }
}

impl FromIterator<usize> for ValueSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ValueSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl ValueSet {
    pub fn singleton(k: usize) -> Self {
        ValueSet(vec![k])
    }

    pub fn full(cardinality: usize) -> Self {
        ValueSet((0..cardinality).collect())
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn intersection(&self, other: &ValueSet) -> ValueSet {
        ValueSet(self.0.iter().copied().filter(|&k| other.contains(k)).collect())
    }

    pub fn union(&self, other: &ValueSet) -> ValueSet {
        self.0.iter().chain(other.0.iter()).copied().collect()
    }

    pub fn without(&self, k: usize) -> ValueSet {
        ValueSet(self.0.iter().copied().filter(|&v| v != k).collect())
    }

    pub fn is_disjoint(&self, other: &ValueSet) -> bool {
        self.0.iter().all(|&k| !other.contains(k))
    }
}

/// A product set of parent states: for every constrained variable, the set
/// of values it may take. Unlisted variables are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Region {
    constraints: Vec<(usize, ValueSet)>,
}

impl Region {
    pub fn any() -> Self {
        Region::default()
    }

    pub fn constraints(&self) -> &[(usize, ValueSet)] {
        &self.constraints
    }

    pub fn constraint(&self, var: usize) -> Option<&ValueSet> {
        self.constraints
            .binary_search_by_key(&var, |(v, _)| *v)
            .ok()
            .map(|i| &self.constraints[i].1)
    }

    /// Values of `var` admitted by this region.
    pub fn values(&self, var: usize, cardinality: usize) -> ValueSet {
        self.constraint(var).cloned().unwrap_or_else(|| ValueSet::full(cardinality))
    }

    /// Intersect with `var ∈ values`; `None` when the result is empty.
    pub fn restrict(&self, var: usize, values: &ValueSet, cardinality: usize) -> Option<Region> {
        let kept = self.values(var, cardinality).intersection(values);
        if kept.is_empty() {
            return None;
        }
        let mut constraints = self.constraints.clone();
        match constraints.binary_search_by_key(&var, |(v, _)| *v) {
            Ok(i) => constraints[i].1 = kept,
            Err(i) => constraints.insert(i, (var, kept)),
        }
        Some(Region { constraints })
    }

    pub fn contains(&self, case: &[usize]) -> bool {
        self.constraints.iter().all(|(v, s)| s.contains(case[*v]))
    }

    /// Fraction of the joint states of the constrained variables that lie in
    /// the region: `Π |S_v| / r_v`.
    pub fn fraction(&self, domain: &Domain) -> f64 {
        self.constraints
            .iter()
            .map(|(v, s)| s.len() as f64 / domain.cardinality(*v) as f64)
            .product()
    }

    /// Expand into the parent-state indices (over `parents`) lying in the region.
    pub fn parent_states(&self, domain: &Domain, parents: &[usize]) -> Vec<usize> {
        let mut out = vec![0usize];
        let mut radix = 1usize;
        for &p in parents {
            let vals = self.values(p, domain.cardinality(p));
            out = out
                .iter()
                .flat_map(|&base| vals.iter().map(move |k| base + k * radix))
                .collect();
            radix *= domain.cardinality(p);
        }
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub values: ValueSet,
    pub child: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Split { var: usize, edges: Vec<Edge> },
    Leaf,
}

/// The decision graph implementing the conditional distribution of `owner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionGraph {
    owner: usize,
    root: NodeId,
    nodes: BTreeMap<NodeId, Node>,
    next_id: NodeId,
}

impl DecisionGraph {
    /// The graph whose root is its only leaf: no constraints on the parents.
    pub fn single_leaf(owner: usize) -> Self {
        DecisionGraph { owner, root: 0, nodes: BTreeMap::from([(0, Node::Leaf)]), next_id: 1 }
    }

    /// Assemble a graph from raw parts. No invariant is checked; run
    /// [`violations`](Self::violations) before trusting the result.
    pub fn from_parts(owner: usize, root: NodeId, nodes: BTreeMap<NodeId, Node>) -> Self {
        let next_id = nodes.keys().next_back().map_or(0, |&k| k + 1);
        DecisionGraph { owner, root, nodes, next_id }
    }

    /// A complete tree: level `l` splits on the `l`-th parent with one child
    /// per state.
    pub fn complete_tree(owner: usize, parents: &[usize], domain: &Domain) -> Self {
        let mut g = DecisionGraph::single_leaf(owner);
        let mut frontier = vec![g.root];
        for &p in parents {
            let groups: Vec<ValueSet> =
                (0..domain.cardinality(p)).map(ValueSet::singleton).collect();
            let mut next = Vec::new();
            for leaf in frontier {
                next.extend(g.split_leaf(leaf, p, groups.clone()).expect("fresh leaf"));
            }
            frontier = next;
        }
        g
    }

    /// Build the complete tree over `parents` and merge the leaves inside
    /// each class. `classes` must partition `0..q` where `q` is the number of
    /// parent states.
    pub fn merge_complete_tree(
        owner: usize,
        parents: &[usize],
        domain: &Domain,
        classes: &[Vec<usize>],
    ) -> Result<Self, ModelError> {
        let q = domain.state_count(parents);
        if q > 1e7 {
            return Err(ModelError::InvalidPartition(format!(
                "{q} parent states is too many to enumerate"
            )));
        }
        let q = q as usize;
        let mut class_of = vec![usize::MAX; q];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(ModelError::InvalidPartition(format!("class {c} is empty")));
            }
            for &j in class {
                if j >= q {
                    return Err(ModelError::InvalidPartition(format!(
                        "parent state {j} out of range 0..{q}"
                    )));
                }
                if class_of[j] != usize::MAX {
                    return Err(ModelError::InvalidPartition(format!(
                        "parent state {j} appears in more than one class"
                    )));
                }
                class_of[j] = c;
            }
        }
        if let Some(j) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(ModelError::InvalidPartition(format!("parent state {j} is not covered")));
        }

        let mut g = DecisionGraph::complete_tree(owner, parents, domain);
        let mut case = vec![0; domain.len()];
        let mut representative: Vec<Option<NodeId>> = vec![None; classes.len()];
        for (j, &c) in class_of.iter().enumerate() {
            domain.decode_parent_state(parents, j, &mut case);
            let leaf = g.lookup(&case)?;
            match representative[c] {
                None => representative[c] = Some(leaf),
                Some(rep) if rep != leaf => {
                    let kept = g.merge_leaves(rep, leaf)?;
                    representative[c] = Some(kept);
                }
                Some(_) => {}
            }
        }
        Ok(g)
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn next_id(&self) -> NodeId {
        self.next_id
    }

    /// Ensure freshly created nodes get ids of at least `next`.
    pub fn reserve_ids(&mut self, next: NodeId) {
        self.next_id = self.next_id.max(next);
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> + '_ {
        self.nodes.iter().map(|(&id, n)| (id, n))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        matches!(self.nodes.get(&id), Some(Node::Leaf))
    }

    /// Leaf ids in ascending order.
    pub fn leaves(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|(_, n)| matches!(n, Node::Leaf))
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.values().filter(|n| matches!(n, Node::Leaf)).count()
    }

    /// Variables annotating at least one split node.
    pub fn split_vars(&self) -> BTreeSet<usize> {
        self.nodes
            .values()
            .filter_map(|n| match n {
                Node::Split { var, .. } => Some(*var),
                Node::Leaf => None,
            })
            .collect()
    }

    /// Follow the edges selected by `case` (indexed by variable) from the root
    /// to a leaf.
    pub fn lookup(&self, case: &[usize]) -> Result<NodeId, ModelError> {
        let mut v = self.root;
        for _ in 0..=self.nodes.len() {
            match self.nodes.get(&v) {
                Some(Node::Leaf) => return Ok(v),
                Some(Node::Split { var, edges }) => {
                    let k = case[*var];
                    v = edges
                        .iter()
                        .find(|e| e.values.contains(k))
                        .ok_or(ModelError::NoCoveringEdge { node: v, var: *var, value: k })?
                        .child;
                }
                None => return Err(ModelError::DanglingNode(v)),
            }
        }
        Err(ModelError::CyclicGraph)
    }

    /// Leaf reached by parent-state index `j` over `parents`.
    pub fn lookup_state(
        &self,
        domain: &Domain,
        parents: &[usize],
        j: usize,
    ) -> Result<NodeId, ModelError> {
        let mut case = vec![0; domain.len()];
        domain.decode_parent_state(parents, j, &mut case);
        self.lookup(&case)
    }

    /// Node ids ordered so that every node follows all of its graph parents.
    fn topological_nodes(&self) -> Result<Vec<NodeId>, ModelError> {
        let mut indeg: BTreeMap<NodeId, usize> = self.nodes.keys().map(|&k| (k, 0)).collect();
        for node in self.nodes.values() {
            if let Node::Split { edges, .. } = node {
                for child in distinct_children(edges) {
                    *indeg.get_mut(&child).ok_or(ModelError::DanglingNode(child))? += 1;
                }
            }
        }
        let mut ready: Vec<NodeId> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&k, _)| k).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(v) = ready.pop() {
            order.push(v);
            if let Some(Node::Split { edges, .. }) = self.nodes.get(&v) {
                for child in distinct_children(edges) {
                    let d = indeg.get_mut(&child).expect("checked above");
                    *d -= 1;
                    if *d == 0 {
                        ready.push(child);
                    }
                }
            }
        }
        if order.len() != self.nodes.len() {
            return Err(ModelError::CyclicGraph);
        }
        Ok(order)
    }

    /// For every node, the disjoint regions of parent space whose states
    /// reach it (one region per distinct root path).
    pub fn node_regions(&self, domain: &Domain) -> Result<BTreeMap<NodeId, Vec<Region>>, ModelError> {
        let order = self.topological_nodes()?;
        let mut regions: BTreeMap<NodeId, Vec<Region>> =
            self.nodes.keys().map(|&k| (k, Vec::new())).collect();
        regions.insert(self.root, vec![Region::any()]);
        for v in order {
            let Some(Node::Split { var, edges }) = self.nodes.get(&v) else { continue };
            let here = regions.get(&v).cloned().unwrap_or_default();
            let r = domain.cardinality(*var);
            for e in edges {
                let restricted: Vec<Region> =
                    here.iter().filter_map(|reg| reg.restrict(*var, &e.values, r)).collect();
                regions.get_mut(&e.child).ok_or(ModelError::DanglingNode(e.child))?.extend(restricted);
            }
        }
        Ok(regions)
    }

    /// Regions reaching each leaf, keyed by ascending leaf id.
    pub fn leaf_regions(&self, domain: &Domain) -> Result<BTreeMap<NodeId, Vec<Region>>, ModelError> {
        let mut all = self.node_regions(domain)?;
        all.retain(|id, _| self.is_leaf(*id));
        Ok(all)
    }

    /// The leaf-set preimages: for every leaf, the sorted parent-state
    /// indices over `parents` that reach it.
    pub fn leaf_set_indices(
        &self,
        domain: &Domain,
        parents: &[usize],
    ) -> Result<BTreeMap<NodeId, Vec<usize>>, ModelError> {
        Ok(self
            .leaf_regions(domain)?
            .into_iter()
            .map(|(leaf, regs)| {
                let mut js: Vec<usize> =
                    regs.iter().flat_map(|r| r.parent_states(domain, parents)).collect();
                js.sort_unstable();
                (leaf, js)
            })
            .collect())
    }

    /// The leaf partition of parent states in canonical form (classes sorted
    /// internally and by first element), independent of leaf ids.
    pub fn partition(&self, domain: &Domain, parents: &[usize]) -> Result<Vec<Vec<usize>>, ModelError> {
        let mut classes: Vec<Vec<usize>> = self
            .leaf_set_indices(domain, parents)?
            .into_values()
            .filter(|c| !c.is_empty())
            .collect();
        classes.sort();
        Ok(classes)
    }

    /// Turn leaf `leaf` into a split node on `var` with one fresh leaf per
    /// group. Returns the new leaf ids in group order.
    pub fn split_leaf(
        &mut self,
        leaf: NodeId,
        var: usize,
        groups: Vec<ValueSet>,
    ) -> Result<Vec<NodeId>, ModelError> {
        if !self.is_leaf(leaf) {
            return Err(ModelError::NotALeaf(leaf));
        }
        let mut edges = Vec::with_capacity(groups.len());
        for values in groups {
            let child = self.next_id;
            self.next_id += 1;
            self.nodes.insert(child, Node::Leaf);
            edges.push(Edge { values, child });
        }
        let ids = edges.iter().map(|e| e.child).collect();
        self.nodes.insert(leaf, Node::Split { var, edges });
        Ok(ids)
    }

    /// Merge two distinct leaves. The lower id survives and inherits every
    /// graph parent of the other; parallel edges into it are coalesced.
    pub fn merge_leaves(&mut self, a: NodeId, b: NodeId) -> Result<NodeId, ModelError> {
        if a == b {
            return Err(ModelError::SameLeaf(a));
        }
        for id in [a, b] {
            if !self.is_leaf(id) {
                return Err(ModelError::NotALeaf(id));
            }
        }
        let (keep, gone) = (a.min(b), a.max(b));
        self.nodes.remove(&gone);
        for node in self.nodes.values_mut() {
            if let Node::Split { edges, .. } = node {
                let mut retarget = false;
                for e in edges.iter_mut() {
                    if e.child == gone {
                        e.child = keep;
                        retarget = true;
                    }
                }
                if retarget {
                    coalesce(edges, keep);
                }
            }
        }
        if self.root == gone {
            self.root = keep;
        }
        Ok(keep)
    }

    /// Structural invariant breaches of this graph for the given parent set.
    pub fn violations(&self, domain: &Domain, parents: &[usize]) -> Vec<Violation> {
        let owner = self.owner;
        let mut out = Vec::new();
        if !self.nodes.contains_key(&self.root) {
            out.push(Violation::MissingRoot { owner, root: self.root });
            return out;
        }
        let mut has_parent: BTreeSet<NodeId> = BTreeSet::new();
        for (&id, node) in &self.nodes {
            let Node::Split { var, edges } = node else { continue };
            if *var == owner {
                out.push(Violation::SelfSplit { owner, node: id });
            } else if parents.binary_search(var).is_err() {
                out.push(Violation::SplitOnNonParent { owner, node: id, var: *var });
            }
            if *var >= domain.len() {
                continue;
            }
            if edges.is_empty() {
                out.push(Violation::EmptySplit { owner, node: id });
            }
            let r = domain.cardinality(*var);
            for (i, e) in edges.iter().enumerate() {
                if e.values.is_empty() || e.values.iter().any(|k| k >= r) {
                    out.push(Violation::BadEdgeLabel { owner, node: id, child: e.child });
                }
                if edges[..i].iter().any(|f| !f.values.is_disjoint(&e.values)) {
                    out.push(Violation::OverlappingEdges { owner, node: id });
                }
                if !self.nodes.contains_key(&e.child) {
                    out.push(Violation::DanglingChild { owner, node: id, child: e.child });
                }
                has_parent.insert(e.child);
            }
        }
        if has_parent.contains(&self.root) {
            out.push(Violation::RootHasParent { owner });
        }
        for &id in self.nodes.keys() {
            if id != self.root && !has_parent.contains(&id) {
                out.push(Violation::Unreachable { owner, node: id });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let regions = match self.node_regions(domain) {
            Ok(r) => r,
            Err(_) => {
                out.push(Violation::CyclicDecisionGraph { owner });
                return out;
            }
        };
        for (&id, node) in &self.nodes {
            let regs = &regions[&id];
            if regs.is_empty() {
                out.push(Violation::Unreachable { owner, node: id });
                continue;
            }
            let Node::Split { var, edges } = node else { continue };
            let r = domain.cardinality(*var);
            let reachable = reachable_values(regs, *var, r);
            let covered = edges.iter().fold(ValueSet::default(), |acc, e| acc.union(&e.values));
            if reachable.iter().any(|k| !covered.contains(k)) {
                out.push(Violation::NotExhaustive { owner, node: id, var: *var });
            }
        }
        out
    }
}

/// Union over `regions` of the values `var` may take.
pub fn reachable_values(regions: &[Region], var: usize, cardinality: usize) -> ValueSet {
    let mut acc = ValueSet::default();
    for reg in regions {
        match reg.constraint(var) {
            None => return ValueSet::full(cardinality),
            Some(s) => acc = acc.union(s),
        }
    }
    acc
}

fn distinct_children(edges: &[Edge]) -> BTreeSet<NodeId> {
    edges.iter().map(|e| e.child).collect()
}

fn coalesce(edges: &mut Vec<Edge>, child: NodeId) {
    let mut first: Option<usize> = None;
    let mut i = 0;
    while i < edges.len() {
        if edges[i].child == child {
            match first {
                None => {
                    first = Some(i);
                    i += 1;
                }
                Some(f) => {
                    let e = edges.remove(i);
                    edges[f].values = edges[f].values.union(&e.values);
                }
            }
        } else {
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary3() -> Domain {
        Domain::from_cardinalities(&[2, 2, 2]).unwrap()
    }

    /// Root splits x; x=0 splits y; x=1 is a leaf.
    fn context_tree() -> DecisionGraph {
        let mut g = DecisionGraph::single_leaf(2);
        let kids = g.split_leaf(0, 0, vec![ValueSet::singleton(0), ValueSet::singleton(1)]).unwrap();
        g.split_leaf(kids[0], 1, vec![ValueSet::singleton(0), ValueSet::singleton(1)]).unwrap();
        g
    }

    #[test]
    fn context_tree_shares_leaf_when_x_is_one() {
        let g = context_tree();
        let a = g.lookup(&[1, 0, 0]).unwrap();
        let b = g.lookup(&[1, 1, 0]).unwrap();
        assert_eq!(a, b);
        assert_ne!(g.lookup(&[0, 0, 0]).unwrap(), g.lookup(&[0, 1, 0]).unwrap());
    }

    #[test]
    fn merged_graph_shares_leaf_across_branches() {
        let d = binary3();
        let g = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &[vec![0], vec![1, 2], vec![3]])
            .unwrap();
        assert_eq!(g.lookup(&[0, 1, 0]).unwrap(), g.lookup(&[1, 0, 0]).unwrap());
        assert_eq!(g.leaf_count(), 3);
        let idx: Vec<Vec<usize>> = g.leaf_set_indices(&d, &[0, 1]).unwrap().into_values().collect();
        assert_eq!(idx, vec![vec![0], vec![1, 2], vec![3]]);
        assert!(g.violations(&d, &[0, 1]).is_empty());
    }

    #[test]
    fn root_leaf_reached_by_every_state() {
        let d = Domain::from_cardinalities(&[2, 3, 2]).unwrap();
        let g = DecisionGraph::single_leaf(2);
        for j in 0..6 {
            assert_eq!(g.lookup_state(&d, &[0, 1], j).unwrap(), 0);
        }
        let idx = g.leaf_set_indices(&d, &[0, 1]).unwrap();
        assert_eq!(idx[&0], (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn complete_tree_over_two_ternary_parents_has_singleton_preimages() {
        let d = Domain::from_cardinalities(&[3, 3, 2]).unwrap();
        let g = DecisionGraph::complete_tree(2, &[0, 1], &d);
        let idx = g.leaf_set_indices(&d, &[0, 1]).unwrap();
        assert_eq!(idx.len(), 9);
        // brute force: push each of the 9 states through the tree
        let mut seen = BTreeSet::new();
        for j in 0..9 {
            let leaf = g.lookup_state(&d, &[0, 1], j).unwrap();
            assert_eq!(idx[&leaf], vec![j]);
            seen.insert(leaf);
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn singleton_classes_give_complete_tree() {
        let d = Domain::from_cardinalities(&[2, 3, 2]).unwrap();
        let classes: Vec<Vec<usize>> = (0..6).map(|j| vec![j]).collect();
        let g = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &classes).unwrap();
        assert_eq!(g.leaf_count(), 6);
    }

    #[test]
    fn merge_complete_tree_rejects_bad_partitions() {
        let d = binary3();
        for classes in [
            vec![vec![0, 1], vec![2]],
            vec![vec![0, 1], vec![1, 2, 3]],
            vec![vec![0, 1, 2, 3, 4]],
            vec![vec![0, 1, 2, 3], vec![]],
        ] {
            assert!(matches!(
                DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &classes),
                Err(ModelError::InvalidPartition(_))
            ));
        }
    }

    #[test]
    fn merging_siblings_coalesces_edges() {
        let d = binary3();
        let mut g = DecisionGraph::single_leaf(2);
        let kids = g.split_leaf(0, 0, vec![ValueSet::singleton(0), ValueSet::singleton(1)]).unwrap();
        let kept = g.merge_leaves(kids[0], kids[1]).unwrap();
        match g.node(0).unwrap() {
            Node::Split { edges, .. } => {
                assert_eq!(edges.len(), 1);
                assert_eq!(edges[0].values, ValueSet::full(2));
                assert_eq!(edges[0].child, kept);
            }
            Node::Leaf => panic!("root should still split"),
        }
        assert!(g.violations(&d, &[0]).is_empty());
    }

    #[test]
    fn reachable_values_union_over_paths() {
        let d = binary3();
        let g = DecisionGraph::merge_complete_tree(2, &[0, 1], &d, &[vec![0], vec![1, 2], vec![3]])
            .unwrap();
        let regions = g.leaf_regions(&d).unwrap();
        let merged = g.lookup(&[0, 1, 0]).unwrap();
        assert_eq!(reachable_values(&regions[&merged], 0, 2), ValueSet::full(2));
        let single = g.lookup(&[0, 0, 0]).unwrap();
        assert_eq!(reachable_values(&regions[&single], 1, 2), ValueSet::singleton(0));
    }

    #[test]
    fn detects_missing_edge_coverage() {
        let d = binary3();
        let mut nodes = BTreeMap::new();
        nodes.insert(0, Node::Split { var: 0, edges: vec![Edge { values: ValueSet::singleton(0), child: 1 }] });
        nodes.insert(1, Node::Leaf);
        let g = DecisionGraph::from_parts(2, 0, nodes);
        let v = g.violations(&d, &[0]);
        assert!(v.iter().any(|x| matches!(x, Violation::NotExhaustive { .. })));
        assert!(matches!(g.lookup(&[1, 0, 0]), Err(ModelError::NoCoveringEdge { .. })));
    }
}
