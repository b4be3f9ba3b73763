//! Operator-set sweeps reported as relative log scores.

mod protocols;
mod report;

pub use protocols::{sweep_all_nodes_fixed_g, sweep_full_search, sweep_static};
pub use report::{Cell, Row, SweepReport, COMP};
