//! Pass/fail reports produced by the oracle checks.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(
        &mut self,
        name: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
        pass: bool,
    ) {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        });
    }

    /// Records a check that passes when `expected == actual`.
    pub fn expect_eq<T: PartialEq + ToString>(&mut self, name: impl Into<String>, expected: T, actual: T) {
        let pass = expected == actual;
        self.record(name, expected, actual, pass);
    }

    /// Records an informational entry that never fails.
    pub fn note(&mut self, name: impl Into<String>, value: impl ToString) {
        self.record(name, "-", value, true);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.pass { "ok  " } else { "FAIL" };
            writeln!(f, "{tag} {}: expected {}, got {}", c.name, c.expected, c.actual)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_and_serializes() {
        let mut r = Report::new();
        r.expect_eq("vertices", 10, 10);
        r.expect_eq("degree", 6, 5);
        r.note("diag", "ln2 vs ln3");
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);

        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_string().contains("FAIL degree: expected 6, got 5"));
    }
}
