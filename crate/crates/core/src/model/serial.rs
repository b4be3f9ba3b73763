//! JSON documents for structures and parameterized networks.
//!
//! A structure document carries the domain, the parent sets and a node listing
//! per decision graph. A network document adds one probability vector per
//! leaf. Both may embed the configuration that produced them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    DecisionGraph, Domain, Edge, GlobalStructure, ModelError, NetworkStructure, Node, NodeId,
    ParameterizedNetwork, ValueSet,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub values: ValueSet,
    pub child: NodeId,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeRecord {
    Split { id: NodeId, var: usize, edges: Vec<EdgeRecord> },
    Leaf { id: NodeId },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphRecord {
    pub owner: usize,
    pub root: NodeId,
    pub nodes: Vec<NodeRecord>,
    /// Id the next created node will receive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_id: Option<NodeId>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeafDistribution {
    pub leaf: NodeId,
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureDocument {
    pub domain: Domain,
    pub parents: GlobalStructure,
    pub graphs: Vec<GraphRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distributions: Option<Vec<Vec<LeafDistribution>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<Value>,
}

impl From<&DecisionGraph> for GraphRecord {
    fn from(g: &DecisionGraph) -> Self {
        let nodes = g
            .nodes()
            .map(|(id, n)| match n {
                Node::Leaf => NodeRecord::Leaf { id },
                Node::Split { var, edges } => NodeRecord::Split {
                    id,
                    var: *var,
                    edges: edges
                        .iter()
                        .map(|e| EdgeRecord { values: e.values.clone(), child: e.child })
                        .collect(),
                },
            })
            .collect();
        GraphRecord { owner: g.owner(), root: g.root(), nodes, next_id: Some(g.next_id()) }
    }
}

impl GraphRecord {
    pub fn to_graph(&self) -> Result<DecisionGraph, ModelError> {
        let mut nodes = BTreeMap::new();
        for rec in &self.nodes {
            let (id, node) = match rec {
                NodeRecord::Leaf { id } => (*id, Node::Leaf),
                NodeRecord::Split { id, var, edges } => (
                    *id,
                    Node::Split {
                        var: *var,
                        edges: edges
                            .iter()
                            .map(|e| Edge { values: e.values.clone(), child: e.child })
                            .collect(),
                    },
                ),
            };
            if nodes.insert(id, node).is_some() {
                return Err(ModelError::Format(format!(
                    "graph {}: node id {id} listed twice",
                    self.owner
                )));
            }
        }
        let mut g = DecisionGraph::from_parts(self.owner, self.root, nodes);
        if let Some(next) = self.next_id {
            g.reserve_ids(next);
        }
        Ok(g)
    }
}

impl StructureDocument {
    pub fn from_structure(s: &NetworkStructure, config: Option<Value>) -> Self {
        StructureDocument {
            domain: s.domain.clone(),
            parents: s.global.clone(),
            graphs: s.local.iter().map(GraphRecord::from).collect(),
            distributions: None,
            config,
        }
    }

    pub fn from_network(net: &ParameterizedNetwork, config: Option<Value>) -> Self {
        let mut doc = StructureDocument::from_structure(&net.structure, config);
        doc.distributions = Some(
            net.distributions
                .iter()
                .map(|m| {
                    m.iter().map(|(&leaf, p)| LeafDistribution { leaf, probs: p.clone() }).collect()
                })
                .collect(),
        );
        doc
    }

    /// The structure, validated.
    pub fn structure(&self) -> Result<NetworkStructure, ModelError> {
        let local = self.graphs.iter().map(GraphRecord::to_graph).collect::<Result<_, _>>()?;
        let s = NetworkStructure {
            domain: self.domain.clone(),
            global: GlobalStructure::from_parents(self.parents.parent_sets().to_vec()),
            local,
        };
        s.ensure_valid()?;
        Ok(s)
    }

    /// The parameterized network, validated. Fails if the document has no
    /// distributions.
    pub fn network(&self) -> Result<ParameterizedNetwork, ModelError> {
        let structure = self.structure()?;
        let dists = self
            .distributions
            .as_ref()
            .ok_or_else(|| ModelError::Format("document has no leaf distributions".into()))?;
        let distributions = dists
            .iter()
            .map(|v| v.iter().map(|d| (d.leaf, d.probs.clone())).collect())
            .collect();
        ParameterizedNetwork::new(structure, distributions)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ModelError::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
