use serde::{Deserialize, Serialize};

/// The global dag, stored as one sorted parent list per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GlobalStructure {
    parents: Vec<Vec<usize>>,
}

impl GlobalStructure {
    pub fn empty(n: usize) -> Self {
        GlobalStructure { parents: vec![Vec::new(); n] }
    }

    /// Parent lists are sorted and deduplicated; acyclicity is not checked here.
    pub fn from_parents(mut parents: Vec<Vec<usize>>) -> Self {
        for p in &mut parents {
            p.sort_unstable();
            p.dedup();
        }
        GlobalStructure { parents }
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn parent_sets(&self) -> &[Vec<usize>] {
        &self.parents
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.parents[to].binary_search(&from).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    /// Edges as `(from, to)` pairs, ordered by `to` then `from`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .flat_map(|(to, ps)| ps.iter().map(move |&from| (from, to)))
            .collect()
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        if let Err(pos) = self.parents[to].binary_search(&from) {
            self.parents[to].insert(pos, from);
        }
    }

    pub fn remove_edge(&mut self, from: usize, to: usize) {
        if let Ok(pos) = self.parents[to].binary_search(&from) {
            self.parents[to].remove(pos);
        }
    }

    pub fn set_parents(&mut self, i: usize, mut parents: Vec<usize>) {
        parents.sort_unstable();
        parents.dedup();
        self.parents[i] = parents;
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (to, ps) in self.parents.iter().enumerate() {
            for &from in ps {
                ch[from].push(to);
            }
        }
        ch
    }

    /// True if `target` can be reached from `source` along directed edges.
    pub fn reaches(&self, source: usize, target: usize) -> bool {
        self.reaches_with(&self.children(), source, target)
    }

    fn reaches_with(&self, children: &[Vec<usize>], source: usize, target: usize) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![source];
        while let Some(v) = stack.pop() {
            if v == target {
                return true;
            }
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(children[v].iter().copied().filter(|&c| !seen[c]));
        }
        false
    }

    /// Descendants of `i`, including `i` itself.
    pub fn descendants(&self, i: usize) -> Vec<bool> {
        let children = self.children();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![i];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(children[v].iter().copied().filter(|&c| !seen[c]));
        }
        seen
    }

    /// Kahn ordering with ties broken by lowest index; `None` if cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let children = self.children();
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &c in &children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Whether adding `from -> to` keeps the graph acyclic.
    pub fn can_add_edge(&self, from: usize, to: usize) -> bool {
        from != to && !self.has_edge(from, to) && !self.reaches(to, from)
    }

    /// Whether reversing the existing edge `from -> to` keeps the graph acyclic.
    pub fn can_reverse_edge(&self, from: usize, to: usize) -> bool {
        if !self.has_edge(from, to) {
            return false;
        }
        let mut g = self.clone();
        g.remove_edge(from, to);
        !g.reaches(from, to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_two_cycle() {
        let g = GlobalStructure::from_parents(vec![vec![1], vec![0]]);
        assert!(!g.is_acyclic());
    }

    #[test]
    fn topological_order_respects_edges() {
        let g = GlobalStructure::from_parents(vec![vec![2], vec![], vec![1]]);
        assert_eq!(g.topological_order(), Some(vec![1, 2, 0]));
    }

    #[test]
    fn edge_feasibility() {
        // 0 -> 1 -> 2
        let g = GlobalStructure::from_parents(vec![vec![], vec![0], vec![1]]);
        assert!(!g.can_add_edge(2, 0));
        assert!(g.can_add_edge(0, 2));
        assert!(g.can_reverse_edge(1, 2));
        let mut g2 = g.clone();
        g2.add_edge(0, 2);
        // 2 -> 0 together with 0 -> 1 -> 2 is a cycle
        assert!(!g2.can_reverse_edge(0, 2));
        assert!(g2.descendants(0).iter().all(|&d| d));
    }
}
