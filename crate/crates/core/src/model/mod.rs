//! Domains, datasets, global dags and decision graphs.

mod dag;
mod domain;
mod graph;
mod network;
pub mod serial;

pub use dag::GlobalStructure;
pub use domain::{Dataset, Domain, Variable};
pub use graph::{reachable_values, DecisionGraph, Edge, Node, NodeId, Region, ValueSet};
pub use network::{NetworkStructure, ParameterizedNetwork, Violation};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("variable {name:?} has {cardinality} states; at least 2 are required")]
    Cardinality { name: String, cardinality: usize },
    #[error("duplicate variable name {0:?}")]
    DuplicateName(String),
    #[error("variable {name:?} lists state {state:?} twice")]
    DuplicateState { name: String, state: String },
    #[error("case {row} has {found} values, expected {expected}")]
    CaseWidth { row: usize, expected: usize, found: usize },
    #[error("case {row}: code {code} of variable {var} is outside 0..{cardinality}")]
    CodeOutOfRange { row: usize, var: usize, code: usize, cardinality: usize },
    #[error("node {node} splits on {var} but no edge covers value {value}")]
    NoCoveringEdge { node: NodeId, var: usize, value: usize },
    #[error("node {0} does not exist")]
    DanglingNode(NodeId),
    #[error("decision graph contains a cycle")]
    CyclicGraph,
    #[error("node {0} is not a leaf")]
    NotALeaf(NodeId),
    #[error("cannot merge leaf {0} with itself")]
    SameLeaf(NodeId),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("structure is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("malformed structure document: {0}")]
    Format(String),
}
