//! Structured pass/fail records shared by every verification routine.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// `Fail` means the identity was evaluated and does not hold; `Error` means
/// it could not be evaluated (violated precondition, exhausted budget).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub label: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case_id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl VerificationReport {
    /// Compares two serialized sides; passes iff they are identical.
    pub fn compare(case_id: impl Into<String>, lhs: Value, rhs: Value) -> Self {
        let status = if lhs == rhs {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            case_id: case_id.into(),
            status,
            lhs: Some(lhs),
            rhs: Some(rhs),
            trace: Vec::new(),
            message: None,
            timing_ms: None,
        }
    }

    pub fn pass(case_id: impl Into<String>) -> Self {
        Self::bare(case_id, Status::Pass, None)
    }

    pub fn fail(case_id: impl Into<String>, message: impl Into<String>) -> Self {
        Self::bare(case_id, Status::Fail, Some(message.into()))
    }

    pub fn error(case_id: impl Into<String>, message: impl Into<String>) -> Self {
        Self::bare(case_id, Status::Error, Some(message.into()))
    }

    fn bare(case_id: impl Into<String>, status: Status, message: Option<String>) -> Self {
        Self {
            case_id: case_id.into(),
            status,
            lhs: None,
            rhs: None,
            trace: Vec::new(),
            message,
            timing_ms: None,
        }
    }

    pub fn with_trace(mut self, label: impl Into<String>, value: Value) -> Self {
        self.trace.push(TraceEntry {
            label: label.into(),
            value,
        });
        self
    }

    pub fn with_message(mut self, message: impl Into<String>) -> Self {
        self.message = Some(message.into());
        self
    }

    /// Downgrades a passing report to `Fail` with `message` (no-op otherwise).
    pub fn require(mut self, ok: bool, message: impl Into<String>) -> Self {
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail;
            self.message = Some(message.into());
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_error(&self) -> bool {
        self.status == Status::Error
    }
}
