use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::serial::StructureDocument;
use crate::model::NetworkStructure;

/// Column label of the complete-table baseline.
pub const COMP: &str = "COMP";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub column: String,
    pub absolute: f64,
    /// `absolute` minus the row minimum.
    pub relative: f64,
    /// File name of the learned structure, relative to the report directory.
    pub structure: String,
    #[serde(skip)]
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub prior: String,
    pub cells: Vec<Cell>,
}

/// Rows are parameter priors, columns operator sets (plus the baseline).
/// Rendered forms exclude wall time so reruns are byte-identical.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    #[serde(skip)]
    pub structures: Vec<Vec<NetworkStructure>>,
}

fn structure_name(row: usize, column: &str) -> String {
    format!("row{row}_{}.json", column.to_ascii_lowercase())
}

impl SweepReport {
    /// Assemble a report from per-row `(column, absolute, seconds, structure)` results.
    pub(crate) fn assemble(title: String, columns: Vec<String>, results: Vec<(String, Vec<(f64, f64, NetworkStructure)>)>) -> Self {
        let mut rows = Vec::with_capacity(results.len());
        let mut structures = Vec::with_capacity(results.len());
        for (i, (prior, cells)) in results.into_iter().enumerate() {
            let min = cells.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
            let mut row_cells = Vec::with_capacity(cells.len());
            let mut row_structs = Vec::with_capacity(cells.len());
            for (column, (absolute, secs, s)) in columns.iter().zip(cells) {
                row_cells.push(Cell {
                    column: column.clone(),
                    absolute,
                    relative: absolute - min,
                    structure: structure_name(i, column),
                    wall_seconds: secs,
                });
                row_structs.push(s);
            }
            rows.push(Row { prior, cells: row_cells });
            structures.push(row_structs);
        }
        SweepReport { title, columns, rows, structures }
    }

    pub fn cell(&self, row: usize, column: &str) -> Option<&Cell> {
        self.rows.get(row)?.cells.iter().find(|c| c.column == column)
    }

    pub fn relative(&self, row: usize, column: &str) -> Option<f64> {
        self.cell(row, column).map(|c| c.relative)
    }

    /// Aligned table of relative scores with two decimals.
    pub fn to_text(&self) -> String {
        let label_w = self.rows.iter().map(|r| r.prior.len()).max().unwrap_or(0).max(5);
        let cells: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.cells.iter().map(|c| format!("{:.2}", c.relative)).collect()).collect();
        let col_w: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, h)| cells.iter().map(|r| r[j].len()).chain([h.len()]).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        writeln!(out, "{}", self.title).unwrap();
        write!(out, "{:<label_w$}", "Prior").unwrap();
        for (h, w) in self.columns.iter().zip(&col_w) {
            write!(out, "  {h:>w$}").unwrap();
        }
        out.push('\n');
        for (row, cells) in self.rows.iter().zip(&cells) {
            write!(out, "{:<label_w$}", row.prior).unwrap();
            for (v, w) in cells.iter().zip(&col_w) {
                write!(out, "  {v:>w$}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// Wall time per cell, one line each.
    pub fn timings_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            for c in &row.cells {
                writeln!(out, "{}\t{}\t{:.3}s", row.prior, c.column, c.wall_seconds).unwrap();
            }
        }
        out
    }

    /// Write `report.txt`, `report.json`, `timings.txt` and every learned structure into `dir`.
    pub fn save(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.txt"), self.to_text())?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        std::fs::write(dir.join("timings.txt"), self.timings_text())?;
        for (row, structs) in self.rows.iter().zip(&self.structures) {
            for (cell, s) in row.cells.iter().zip(structs) {
                let config = serde_json::json!({ "prior": row.prior, "column": cell.column });
                std::fs::write(dir.join(&cell.structure), StructureDocument::from_structure(s, Some(config)).to_json())?;
            }
        }
        Ok(())
    }
}
