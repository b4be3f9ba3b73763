use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;

use super::DataError;
use crate::model::{Dataset, Domain, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeaderPolicy {
    /// First row names the columns.
    Present,
    /// Every row is data; columns are named `x0`, `x1`, ...
    Absent,
}

pub fn load_csv(path: &Path, header: HeaderPolicy) -> Result<Dataset, DataError> {
    let file = std::fs::File::open(path)
        .map_err(|source| DataError::Io { path: path.display().to_string(), source })?;
    read_csv(file, header)
}

/// Parse comma-separated categorical tokens. Each column's states are its
/// distinct tokens in lexicographic order, so codes do not depend on row order.
/// Rows are numbered from 1, counting a header row if there is one.
pub fn read_csv<R: Read>(input: R, header: HeaderPolicy) -> Result<Dataset, DataError> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_reader(input);
    let mut records = reader.records();
    let mut names: Option<Vec<String>> = None;
    let mut offset = 1;
    if header == HeaderPolicy::Present {
        match records.next() {
            Some(rec) => names = Some(rec?.iter().map(str::to_owned).collect()),
            None => return Err(DataError::NoColumns),
        }
        offset = 2;
    }
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, rec) in records.enumerate() {
        let rec = rec?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        rows.push(rec.iter().map(str::to_owned).collect());
        let width = names.as_ref().map_or(rows[0].len(), Vec::len);
        let row = rows.last().unwrap();
        if row.len() != width {
            return Err(DataError::Ragged { row: i + offset, expected: width, found: row.len() });
        }
    }
    let width = names.as_ref().map(Vec::len).or(rows.first().map(Vec::len)).unwrap_or(0);
    if width == 0 {
        return Err(DataError::NoColumns);
    }
    let names = names.unwrap_or_else(|| (0..width).map(|i| format!("x{i}")).collect());
    let mut states: Vec<BTreeSet<&str>> = vec![BTreeSet::new(); width];
    for (i, row) in rows.iter().enumerate() {
        for (c, tok) in row.iter().enumerate() {
            if tok.is_empty() {
                return Err(DataError::Missing { row: i + offset, column: names[c].clone() });
            }
            states[c].insert(tok);
        }
    }
    let mut vars = Vec::with_capacity(width);
    for (name, set) in names.iter().zip(&states) {
        if set.len() < 2 {
            return Err(DataError::SingleValued { column: name.clone() });
        }
        vars.push(Variable { name: name.clone(), states: set.iter().map(|s| s.to_string()).collect() });
    }
    let domain = Domain::new(vars)?;
    let cases = rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(c, tok)| domain.variable(c).states.binary_search(tok).expect("token was collected"))
                .collect()
        })
        .collect();
    Ok(Dataset::new(domain, cases)?)
}

/// Re-encode `dataset` in `domain`, matching variables by name and states by label.
pub fn align_to(dataset: &Dataset, domain: &Domain) -> Result<Dataset, DataError> {
    let src = dataset.domain();
    if src == domain {
        return Ok(dataset.clone());
    }
    let mut maps = Vec::with_capacity(domain.len());
    for var in domain.variables() {
        let col = src
            .index_of(&var.name)
            .ok_or_else(|| DataError::MissingColumn(var.name.clone()))?;
        let codes = src
            .variable(col)
            .states
            .iter()
            .map(|label| {
                var.states.iter().position(|s| s == label).ok_or_else(|| DataError::UnknownState {
                    column: var.name.clone(),
                    state: label.clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        maps.push((col, codes));
    }
    let cases = dataset.cases().map(|case| maps.iter().map(|(col, codes)| codes[case[*col]]).collect()).collect();
    Ok(Dataset::new(domain.clone(), cases)?)
}

/// Write the dataset with a header row of variable names and state labels as tokens.
pub fn write_csv<W: Write>(dataset: &Dataset, output: W) -> Result<(), DataError> {
    let mut w = ::csv::Writer::from_writer(output);
    let domain = dataset.domain();
    w.write_record(domain.variables().iter().map(|v| v.name.as_str()))?;
    for case in dataset.cases() {
        w.write_record(case.iter().enumerate().map(|(i, &k)| domain.variable(i).states[k].as_str()))?;
    }
    w.flush().map_err(|source| DataError::Io { path: "<output>".into(), source })?;
    Ok(())
}
