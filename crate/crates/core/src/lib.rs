//! Learning Bayesian networks whose conditional distributions are stored as
//! decision graphs, scored with the closed-form Dirichlet marginal likelihood.

pub mod cli;
pub mod model;
pub mod score;
pub mod data;
pub mod experiments;
pub mod search;
