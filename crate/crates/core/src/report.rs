//! Check records shared by every identity verification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::relative_error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMetric {
    /// `|lhs − rhs| / max(1, |lhs|, |rhs|)`
    Relative,
    /// `|lhs − rhs|`, or the largest entrywise difference for matrix identities.
    Absolute,
}

/// One compared quantity. Complex values serialize as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lhs: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rhs: Option<Complex64>,
    pub error: f64,
    pub pass: bool,
}

/// A sample that could not be evaluated, e.g. because `λ` hit a pole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedSample {
    pub lambda: Complex64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub metric: ErrorMetric,
    pub tolerance: f64,
    pub records: Vec<CheckRecord>,
    #[serde(default)]
    pub skipped: Vec<SkippedSample>,
    pub max_error: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, metric: ErrorMetric, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            metric,
            tolerance,
            records: Vec::new(),
            skipped: Vec::new(),
            max_error: 0.0,
            pass: false,
        }
    }

    /// Records a scalar comparison under this report's metric.
    pub fn compare(&mut self, name: impl Into<String>, lambda: Option<Complex64>, lhs: Complex64, rhs: Complex64) {
        let error = match self.metric {
            ErrorMetric::Relative => relative_error(lhs, rhs),
            ErrorMetric::Absolute => (lhs - rhs).norm(),
        };
        self.push(CheckRecord {
            name: name.into(),
            lambda,
            lhs: Some(lhs),
            rhs: Some(rhs),
            error,
            pass: error <= self.tolerance,
        });
    }

    /// Records a precomputed error (matrix identities, norms).
    pub fn record_error(&mut self, name: impl Into<String>, lambda: Option<Complex64>, error: f64) {
        self.push(CheckRecord {
            name: name.into(),
            lambda,
            lhs: None,
            rhs: None,
            error,
            pass: error <= self.tolerance,
        });
    }

    pub fn skip(&mut self, lambda: Complex64, reason: impl Into<String>) {
        self.skipped.push(SkippedSample { lambda, reason: reason.into() });
    }

    fn push(&mut self, record: CheckRecord) {
        if record.error.is_nan() || self.max_error.is_nan() {
            self.max_error = f64::NAN;
        } else {
            self.max_error = self.max_error.max(record.error);
        }
        self.records.push(record);
        self.pass = self.records.iter().all(|r| r.pass);
    }

    /// Appends every record of `other`, keeping this report's tolerance verdicts.
    pub fn absorb(&mut self, other: IdentityReport) {
        for r in other.records {
            self.push(r);
        }
        self.skipped.extend(other.skipped);
    }
}
