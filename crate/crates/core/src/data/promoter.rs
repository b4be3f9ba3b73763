use std::path::Path;

use super::DataError;
use crate::model::{Dataset, Domain, Variable};

/// Nucleotide positions per sequence.
pub const PROMOTER_POSITIONS: usize = 57;

/// Parse the UCI promoter-gene file: lines `class,name,sequence` with class
/// `+` or `-` and a 57-letter sequence over `a c g t`. The result has one
/// four-state variable per position, `p1` .. `p57`, followed by the binary
/// `promoter` variable with states `+`, `-`.
pub fn parse_promoter(text: &str) -> Result<Dataset, DataError> {
    const BASES: [&str; 4] = ["a", "c", "g", "t"];
    let mut cases = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| DataError::Format { line: i + 1, message };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [class, _, seq] = fields[..] else {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        };
        let class = match class {
            "+" => 0,
            "-" => 1,
            other => return Err(err(format!("class {other:?} is neither + nor -"))),
        };
        let mut case = Vec::with_capacity(PROMOTER_POSITIONS + 1);
        for ch in seq.chars().filter(|c| !c.is_whitespace()) {
            let base = ch.to_ascii_lowercase().to_string();
            match BASES.iter().position(|b| *b == base) {
                Some(k) => case.push(k),
                None => return Err(err(format!("unexpected base {ch:?}"))),
            }
        }
        if case.len() != PROMOTER_POSITIONS {
            return Err(err(format!("sequence has {} bases, expected {PROMOTER_POSITIONS}", case.len())));
        }
        case.push(class);
        cases.push(case);
    }
    let mut vars: Vec<Variable> = (1..=PROMOTER_POSITIONS)
        .map(|p| Variable { name: format!("p{p}"), states: BASES.iter().map(|s| s.to_string()).collect() })
        .collect();
    vars.push(Variable { name: "promoter".into(), states: vec!["+".into(), "-".into()] });
    Ok(Dataset::new(Domain::new(vars)?, cases)?)
}

pub fn load_promoter(path: &Path) -> Result<Dataset, DataError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| DataError::Io { path: path.display().to_string(), source })?;
    parse_promoter(&text)
}
