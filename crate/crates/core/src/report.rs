//! The report document shared by every verifier.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of an exact, depth-bounded check.
///
/// `counts` is a deterministic (sorted) map of named cardinalities; a failing
/// report always carries a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    pub pass: bool,
    pub counts: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub reason: String,
    pub witness: String,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, depth: Option<u32>) -> Self {
        VerificationReport {
            check: check.into(),
            depth,
            pass: true,
            counts: BTreeMap::new(),
            failure: None,
        }
    }

    pub fn count(&mut self, key: impl Into<String>, value: u64) -> &mut Self {
        self.counts.insert(key.into(), value);
        self
    }

    /// Record the first failure; later failures are ignored.
    pub fn fail(&mut self, reason: impl Into<String>, witness: impl fmt::Display) -> &mut Self {
        if self.failure.is_none() {
            self.pass = false;
            self.failure = Some(Failure {
                reason: reason.into(),
                witness: witness.to_string(),
            });
        }
        self
    }

    pub fn failed(check: impl Into<String>, depth: Option<u32>, reason: impl Into<String>, witness: impl fmt::Display) -> Self {
        let mut r = Self::new(check, depth);
        r.fail(reason, witness);
        r
    }

    /// Fold another report's outcome into this one, prefixing its counts.
    pub fn absorb(&mut self, prefix: &str, other: &VerificationReport) {
        for (k, v) in &other.counts {
            self.counts.insert(format!("{prefix}.{k}"), *v);
        }
        if let Some(f) = &other.failure {
            self.fail(format!("{prefix}: {}", f.reason), &f.witness);
        }
    }

    pub fn summary(&self) -> String {
        match &self.failure {
            None => format!("{}: pass", self.check),
            Some(f) => format!("{}: {} (witness {})", self.check, f.reason, f.witness),
        }
    }
}
