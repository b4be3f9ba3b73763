//! Sufficient statistics and the closed-form Bayesian score of a structure
//! with decision-graph local structure.

mod counts;
mod gamma;
mod marginal;
mod prior;

use std::sync::Arc;

use thiserror::Error;

pub use counts::{accumulate_counts, node_statistics, LeafStatistics, LeafStats};
pub use gamma::ln_gamma;
pub use marginal::{
    leaf_log_marginal, log_score, node_log_marginal, node_score, table_node_score, ScoreCache,
};
pub use prior::{assign_alphas, leaf_alphas};

use crate::model::{ModelError, ParameterizedNetwork};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("hyperparameter {value} for state {state} of leaf {leaf} in node {node} is not positive")]
    NonPositiveAlpha { node: usize, leaf: usize, state: usize, value: f64 },
    #[error("prior network gives probability zero to state {state} of node {node} at leaf {leaf}")]
    ZeroPriorProbability { node: usize, leaf: usize, state: usize },
    #[error("exact prior-network enumeration over {size} states exceeds the limit of {limit}")]
    EnumerationTooLarge { size: f64, limit: f64 },
    #[error("prior network domain does not match the data domain")]
    PriorDomainMismatch,
    #[error("equivalent sample size must be positive, got {0}")]
    BadEss(f64),
    #[error("kappa must lie in (0, 1], got {0}")]
    BadKappa(f64),
}

/// Dirichlet hyperparameter assessment.
#[derive(Debug, Clone)]
pub enum ParameterPrior {
    /// Every hyperparameter is one.
    Uniform,
    /// Hyperparameters proportional to prior-network probabilities, scaled
    /// by the equivalent sample size.
    PriorNetwork { network: Arc<ParameterizedNetwork>, ess: f64 },
    /// The prior-network construction with a uniform joint distribution.
    UniformPriorNetwork { ess: f64 },
}

/// Prior over structure hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StructurePrior {
    Uniform,
    /// `p(B) ∝ κ^|Θ|` with `|Θ|` the free-parameter count.
    Kappa(f64),
}

#[derive(Debug, Clone)]
pub struct ScoreConfig {
    pub parameter_prior: ParameterPrior,
    pub structure_prior: StructurePrior,
    /// Largest joint state space enumerated exactly for prior-network
    /// hyperparameters.
    pub enumeration_limit: f64,
}

pub const DEFAULT_ENUMERATION_LIMIT: f64 = 1e7;

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig {
            parameter_prior: ParameterPrior::Uniform,
            structure_prior: StructurePrior::Uniform,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

impl ScoreConfig {
    pub fn uniform() -> Self {
        ScoreConfig::default()
    }

    pub fn uniform_pn(ess: f64) -> Self {
        ScoreConfig {
            parameter_prior: ParameterPrior::UniformPriorNetwork { ess },
            ..ScoreConfig::default()
        }
    }

    pub fn prior_network(network: ParameterizedNetwork, ess: f64) -> Self {
        ScoreConfig {
            parameter_prior: ParameterPrior::PriorNetwork { network: Arc::new(network), ess },
            ..ScoreConfig::default()
        }
    }

    pub fn with_structure_prior(mut self, prior: StructurePrior) -> Self {
        self.structure_prior = prior;
        self
    }

    pub fn check(&self) -> Result<(), ScoreError> {
        match &self.parameter_prior {
            ParameterPrior::Uniform => {}
            ParameterPrior::PriorNetwork { ess, .. } | ParameterPrior::UniformPriorNetwork { ess } => {
                if !(*ess > 0.0) || !ess.is_finite() {
                    return Err(ScoreError::BadEss(*ess));
                }
            }
        }
        if let StructurePrior::Kappa(k) = self.structure_prior {
            if !(k > 0.0 && k <= 1.0) {
                return Err(ScoreError::BadKappa(k));
            }
        }
        Ok(())
    }

    /// Log structure-prior contribution of one node with `leaves` leaves and
    /// `cardinality` states.
    pub fn node_prior(&self, leaves: usize, cardinality: usize) -> f64 {
        match self.structure_prior {
            StructurePrior::Uniform => 0.0,
            StructurePrior::Kappa(k) => (leaves * (cardinality - 1)) as f64 * k.ln(),
        }
    }

    /// Short human-readable label, e.g. `uniform` or `U-PN 10`.
    pub fn label(&self) -> String {
        match &self.parameter_prior {
            ParameterPrior::Uniform => "uniform".into(),
            ParameterPrior::UniformPriorNetwork { ess } => format!("U-PN {ess}"),
            ParameterPrior::PriorNetwork { ess, .. } => format!("PN {ess}"),
        }
    }
}
