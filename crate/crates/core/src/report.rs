//! Pass/fail records with witnesses, shared by all verification routines.

use serde::Serialize;

use crate::exactla::{is_zero_vec, Matrix, Vector};

/// Witnesses kept per check; the total failure count is always exact.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Witness {
    /// Basis indices of the failing input (element, pair or triple).
    pub basis: Vec<usize>,
    /// Difference between the two sides of the identity.
    pub defect: Vector,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: true,
            failures: 0,
            witnesses: Vec::new(),
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: false,
            failures: 1,
            witnesses: Vec::new(),
            detail: Some(detail.into()),
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, detail)
        }
    }

    /// Builds a check from `(basis, defect)` pairs; zero defects pass.
    pub fn from_defects<I>(name: impl Into<String>, defects: I) -> Check
    where
        I: IntoIterator<Item = (Vec<usize>, Vector)>,
    {
        let mut c = Check::pass(name);
        for (basis, defect) in defects {
            if !is_zero_vec(&defect) {
                c.record(basis, defect);
            }
        }
        c
    }

    /// Column-by-column comparison of two matrices of the same shape;
    /// witnesses carry `prefix` followed by the column index.
    pub fn from_matrices(name: impl Into<String>, prefix: &[usize], lhs: &Matrix, rhs: &Matrix) -> Check {
        let mut c = Check::pass(name);
        c.compare(prefix, lhs, rhs);
        c
    }

    /// Records the differing columns of `lhs` and `rhs`.
    pub fn compare(&mut self, prefix: &[usize], lhs: &Matrix, rhs: &Matrix) {
        for (col, d) in lhs.column_defects(rhs) {
            let mut basis = prefix.to_vec();
            basis.push(col);
            self.record(basis, d);
        }
    }

    pub fn record(&mut self, basis: Vec<usize>, defect: Vector) {
        self.passed = false;
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness { basis, defect });
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
