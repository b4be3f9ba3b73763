//! Decision-graph operators and the greedy searches built on them.

mod combined;
mod local;
mod ops;
mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use combined::{combined_greedy, combined_greedy_from, SearchOutcome, SearchStep};
pub use local::{local_greedy, LocalOutcome, NodeSearch};
pub use ops::{
    apply_binary_split, apply_complete_split, apply_merge, apply_operator, enumerate_operators,
    Inapplicable,
};
pub use table::{table_greedy, EdgeMove, TableOutcome};

use crate::model::{ModelError, NodeId};
use crate::score::ScoreError;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Inapplicable(#[from] Inapplicable),
    #[error("invalid search constraints: {0}")]
    Constraints(String),
}

/// A modification to the leaves of one decision graph.
///
/// The derived ordering is the tie-breaking order among equally good
/// operators: complete splits, then binary splits, then merges; within a
/// kind by leaf id, then parent variable, then state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operator {
    /// Replace `leaf` by a split on `parent` with one child per reachable state.
    CompleteSplit { leaf: NodeId, parent: usize },
    /// Replace `leaf` by a split on `parent` into `{state}` and the remaining
    /// reachable states.
    BinarySplit { leaf: NodeId, parent: usize, state: usize },
    /// Merge two distinct leaves; `first < second`.
    Merge { first: NodeId, second: NodeId },
}

impl Operator {
    pub fn split_var(&self) -> Option<usize> {
        match *self {
            Operator::CompleteSplit { parent, .. } | Operator::BinarySplit { parent, .. } => Some(parent),
            Operator::Merge { .. } => None,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::CompleteSplit { leaf, parent } => write!(f, "C({leaf}, x{parent})"),
            Operator::BinarySplit { leaf, parent, state } => write!(f, "B({leaf}, x{parent}, {state})"),
            Operator::Merge { first, second } => write!(f, "M({first}, {second})"),
        }
    }
}

/// Which operator kinds a search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct OperatorSet {
    pub complete: bool,
    pub binary: bool,
    pub merge: bool,
}

impl OperatorSet {
    pub const CBM: OperatorSet = OperatorSet { complete: true, binary: true, merge: true };

    /// The six operator sets compared in the sweeps, in report column order.
    pub fn standard() -> Vec<OperatorSet> {
        ["C", "B", "CB", "CM", "BM", "CBM"].iter().map(|s| s.parse().expect("valid")).collect()
    }

    pub fn allows(&self, op: &Operator) -> bool {
        match op {
            Operator::CompleteSplit { .. } => self.complete,
            Operator::BinarySplit { .. } => self.binary,
            Operator::Merge { .. } => self.merge,
        }
    }
}

impl FromStr for OperatorSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = OperatorSet { complete: false, binary: false, merge: false };
        for ch in s.chars() {
            let flag = match ch.to_ascii_uppercase() {
                'C' => &mut set.complete,
                'B' => &mut set.binary,
                'M' => &mut set.merge,
                other => return Err(format!("unknown operator {other:?} in {s:?}; use C, B, M")),
            };
            if std::mem::replace(flag, true) {
                return Err(format!("operator {ch:?} repeated in {s:?}"));
            }
        }
        if !(set.complete || set.binary || set.merge) {
            return Err("operator set must not be empty".into());
        }
        Ok(set)
    }
}

impl TryFrom<String> for OperatorSet {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<OperatorSet> for String {
    fn from(s: OperatorSet) -> Self {
        s.to_string()
    }
}

impl fmt::Display for OperatorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.complete {
            f.write_str("C")?;
        }
        if self.binary {
            f.write_str("B")?;
        }
        if self.merge {
            f.write_str("M")?;
        }
        Ok(())
    }
}

/// Restrictions on the global search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConstraints {
    /// A total order over variables; parents must precede their children.
    pub order: Option<Vec<usize>>,
    /// Cap on the parent set, including parents added temporarily while
    /// candidate operators are scored.
    pub max_parents: Option<usize>,
    /// Keep the global structure fixed and learn only local structure.
    pub fixed_structure: bool,
}

impl SearchConstraints {
    pub fn check(&self, n: usize) -> Result<(), SearchError> {
        if let Some(order) = &self.order {
            let mut seen = vec![false; n];
            if order.len() != n {
                return Err(SearchError::Constraints(format!(
                    "order lists {} variables, domain has {n}",
                    order.len()
                )));
            }
            for &v in order {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(SearchError::Constraints("order is not a permutation".into()));
                }
            }
        }
        Ok(())
    }

    /// Position of every variable in the order, if one is given.
    pub(crate) fn positions(&self, n: usize) -> Option<Vec<usize>> {
        self.order.as_ref().map(|order| {
            let mut pos = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            pos
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opset_parsing() {
        let s: OperatorSet = "mc".parse().unwrap();
        assert_eq!(s.to_string(), "CM");
        assert!("X".parse::<OperatorSet>().is_err());
        assert!("".parse::<OperatorSet>().is_err());
        assert!("CC".parse::<OperatorSet>().is_err());
        assert_eq!(OperatorSet::standard().len(), 6);
    }

    #[test]
    fn tie_break_order() {
        let c = Operator::CompleteSplit { leaf: 5, parent: 9 };
        let b = Operator::BinarySplit { leaf: 0, parent: 0, state: 0 };
        let m = Operator::Merge { first: 0, second: 1 };
        assert!(c < b && b < m);
        assert!(
            Operator::BinarySplit { leaf: 1, parent: 0, state: 3 }
                < Operator::BinarySplit { leaf: 1, parent: 2, state: 0 }
        );
    }

    #[test]
    fn order_must_be_permutation() {
        let c = SearchConstraints { order: Some(vec![0, 0, 1]), ..Default::default() };
        assert!(c.check(3).is_err());
        let c = SearchConstraints { order: Some(vec![2, 0, 1]), ..Default::default() };
        assert!(c.check(3).is_ok());
        assert_eq!(c.positions(3), Some(vec![1, 2, 0]));
    }
}
