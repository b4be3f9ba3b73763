use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// A categorical variable. Its cardinality is the number of state labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub states: Vec<String>,
}

impl Variable {
    /// A variable whose states are labelled `0..cardinality`, zero-padded so
    /// that lexicographic and numeric order agree.
    pub fn with_cardinality(name: impl Into<String>, cardinality: usize) -> Self {
        let width = cardinality.saturating_sub(1).to_string().len();
        let states = (0..cardinality).map(|k| format!("{k:0width$}")).collect();
        Variable { name: name.into(), states }
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }
}

/// Ordered list of variables; a variable's index is its position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DomainRecord", into = "DomainRecord")]
pub struct Domain {
    variables: Vec<Variable>,
}

#[derive(Serialize, Deserialize)]
struct DomainRecord {
    variables: Vec<Variable>,
}

impl TryFrom<DomainRecord> for Domain {
    type Error = ModelError;
    fn try_from(r: DomainRecord) -> Result<Self, Self::Error> {
        Domain::new(r.variables)
    }
}

impl From<Domain> for DomainRecord {
    fn from(d: Domain) -> Self {
        DomainRecord { variables: d.variables }
    }
}

impl Domain {
    pub fn new(variables: Vec<Variable>) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for v in &variables {
            if v.cardinality() < 2 {
                return Err(ModelError::Cardinality {
                    name: v.name.clone(),
                    cardinality: v.cardinality(),
                });
            }
            if !seen.insert(v.name.as_str()) {
                return Err(ModelError::DuplicateName(v.name.clone()));
            }
            let mut labels = HashSet::new();
            for s in &v.states {
                if !labels.insert(s.as_str()) {
                    return Err(ModelError::DuplicateState {
                        name: v.name.clone(),
                        state: s.clone(),
                    });
                }
            }
        }
        Ok(Domain { variables })
    }

    /// Variables named `x0, x1, ...` with the given cardinalities.
    pub fn from_cardinalities(cards: &[usize]) -> Result<Self, ModelError> {
        Domain::new(
            cards
                .iter()
                .enumerate()
                .map(|(i, &r)| Variable::with_cardinality(format!("x{i}"), r))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &Variable {
        &self.variables[i]
    }

    pub fn cardinality(&self, i: usize) -> usize {
        self.variables[i].cardinality()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::cardinality).collect()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.variables[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Number of joint states of `vars`, as a float so that large parent sets
    /// do not overflow.
    pub fn state_count(&self, vars: &[usize]) -> f64 {
        vars.iter().map(|&v| self.cardinality(v) as f64).product()
    }

    /// Mixed-radix index of the parent assignment taken from `case`; the
    /// first listed parent is the least-significant digit.
    pub fn parent_state_index(&self, parents: &[usize], case: &[usize]) -> usize {
        let mut j = 0;
        let mut radix = 1;
        for &p in parents {
            j += case[p] * radix;
            radix *= self.cardinality(p);
        }
        j
    }

    /// Inverse of [`parent_state_index`](Self::parent_state_index): writes the
    /// parent values encoded by `j` into `case`.
    pub fn decode_parent_state(&self, parents: &[usize], mut j: usize, case: &mut [usize]) {
        for &p in parents {
            let r = self.cardinality(p);
            case[p] = j % r;
            j /= r;
        }
    }
}

/// A table of complete categorical cases over a domain, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    domain: Domain,
    values: Vec<usize>,
}

impl Dataset {
    pub fn new(domain: Domain, cases: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let n = domain.len();
        let mut values = Vec::with_capacity(cases.len() * n);
        for (row, case) in cases.iter().enumerate() {
            if case.len() != n {
                return Err(ModelError::CaseWidth { row, expected: n, found: case.len() });
            }
            for (var, &c) in case.iter().enumerate() {
                if c >= domain.cardinality(var) {
                    return Err(ModelError::CodeOutOfRange {
                        row,
                        var,
                        code: c,
                        cardinality: domain.cardinality(var),
                    });
                }
            }
            values.extend_from_slice(case);
        }
        Ok(Dataset { domain, values })
    }

    pub fn empty(domain: Domain) -> Self {
        Dataset { domain, values: Vec::new() }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        if self.domain.is_empty() {
            0
        } else {
            self.values.len() / self.domain.len()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn case(&self, row: usize) -> &[usize] {
        let n = self.domain.len();
        &self.values[row * n..(row + 1) * n]
    }

    pub fn cases(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.values.chunks_exact(self.domain.len().max(1))
    }

    pub fn value(&self, row: usize, var: usize) -> usize {
        self.values[row * self.domain.len() + var]
    }

    /// Same domain, rows reordered by `order`.
    pub fn permuted(&self, order: &[usize]) -> Dataset {
        let n = self.domain.len();
        let mut values = Vec::with_capacity(self.values.len());
        for &row in order {
            values.extend_from_slice(&self.values[row * n..(row + 1) * n]);
        }
        Dataset { domain: self.domain.clone(), values }
    }

    /// The first `count` rows.
    pub fn prefix(&self, count: usize) -> Dataset {
        let n = self.domain.len();
        Dataset {
            domain: self.domain.clone(),
            values: self.values[..count.min(self.len()) * n].to_vec(),
        }
    }

    pub fn into_cases(self) -> Vec<Vec<usize>> {
        self.cases().map(<[usize]>::to_vec).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unary_variable() {
        let err = Domain::new(vec![Variable::with_cardinality("a", 1)]).unwrap_err();
        assert!(matches!(err, ModelError::Cardinality { .. }));
    }

    #[test]
    fn rejects_duplicate_names() {
        let err = Domain::new(vec![
            Variable::with_cardinality("a", 2),
            Variable::with_cardinality("a", 3),
        ])
        .unwrap_err();
        assert!(matches!(err, ModelError::DuplicateName(_)));
    }

    #[test]
    fn padded_labels_sort_numerically() {
        let v = Variable::with_cardinality("a", 12);
        let mut sorted = v.states.clone();
        sorted.sort();
        assert_eq!(sorted, v.states);
        assert_eq!(v.states[3], "03");
    }

    #[test]
    fn mixed_radix_first_parent_is_least_significant() {
        let d = Domain::from_cardinalities(&[2, 3, 2]).unwrap();
        // parents (0, 1): j = x0 + 2 * x1
        assert_eq!(d.parent_state_index(&[0, 1], &[1, 2, 0]), 5);
        let mut case = vec![0; 3];
        for j in 0..6 {
            d.decode_parent_state(&[0, 1], j, &mut case);
            assert_eq!(d.parent_state_index(&[0, 1], &case), j);
        }
    }

    #[test]
    fn dataset_rejects_out_of_range_code() {
        let d = Domain::from_cardinalities(&[2, 2]).unwrap();
        let err = Dataset::new(d, vec![vec![0, 2]]).unwrap_err();
        assert!(matches!(err, ModelError::CodeOutOfRange { row: 0, var: 1, .. }));
    }
}
