use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a pass/fail check, with the generators or degrees that
/// witnessed a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub details: String,
}

impl CheckReport {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed: true,
            witnesses: Vec::new(),
            details: String::new(),
        }
    }

    pub fn fail(
        name: impl Into<String>,
        witnesses: Vec<String>,
        details: impl Into<String>,
    ) -> Self {
        CheckReport {
            name: name.into(),
            passed: false,
            witnesses,
            details: details.into(),
        }
    }

    /// Passes iff `witnesses` is empty.
    pub fn from_witnesses(
        name: impl Into<String>,
        witnesses: Vec<String>,
        details: impl Into<String>,
    ) -> Self {
        let passed = witnesses.is_empty();
        CheckReport {
            name: name.into(),
            passed,
            witnesses,
            details: details.into(),
        }
    }

    pub fn with_details(mut self, details: impl Into<String>) -> Self {
        self.details = details.into();
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name
        )?;
        if !self.witnesses.is_empty() {
            write!(f, " (witnesses: {})", self.witnesses.join(", "))?;
        }
        if !self.details.is_empty() {
            write!(f, ": {}", self.details)?;
        }
        Ok(())
    }
}
