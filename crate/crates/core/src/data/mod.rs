//! Dataset ingestion, synthetic generative networks and forward sampling.

mod bench;
mod csv;
mod promoter;
mod sample;

use thiserror::Error;

pub use self::bench::{make_local_structure_benchmark, GenerativeSpec};
pub use self::csv::{align_to, load_csv, read_csv, write_csv, HeaderPolicy};
pub use self::promoter::{load_promoter, parse_promoter, PROMOTER_POSITIONS};
pub use self::sample::forward_sample;

use crate::model::ModelError;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] ::csv::Error),
    #[error("row {row}: expected {expected} fields, found {found}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("row {row}, column {column:?}: missing value")]
    Missing { row: usize, column: String },
    #[error("column {column:?} takes a single value; every variable needs at least two states")]
    SingleValued { column: String },
    #[error("dataset has no column named {0:?}")]
    MissingColumn(String),
    #[error("state {state:?} of {column:?} is not in the target domain")]
    UnknownState { column: String, state: String },
    #[error("input has no columns")]
    NoColumns,
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("benchmark needs at least 3 variables, got {0}")]
    TooFewVariables(usize),
    #[error("density must lie in [0, 1], got {0}")]
    BadDensity(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}
