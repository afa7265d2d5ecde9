//! Machine-readable outcome of a check suite.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Shortest round-trip decimal form of `x`, matching the report's JSON numbers.
pub fn fmt_num(x: f64) -> String {
    match serde_json::Number::from_f64(x) {
        Some(n) => n.to_string(),
        None => x.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub points_evaluated: u64,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: String,
}

impl Check {
    /// Passes when `max_abs_residual <= tolerance`. Non-finite residuals fail and
    /// are stored as `f64::MAX`, since JSON has no infinities.
    pub fn measured(
        name: &str,
        points_evaluated: u64,
        max_abs_residual: f64,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        let pass = max_abs_residual <= tolerance;
        let mut notes = notes.into();
        let max_abs_residual = if max_abs_residual.is_finite() {
            max_abs_residual
        } else {
            if !notes.is_empty() {
                notes.push_str("; ");
            }
            notes.push_str(&format!("residual was {max_abs_residual}"));
            f64::MAX
        };
        Self {
            name: name.to_string(),
            points_evaluated,
            max_abs_residual,
            tolerance,
            pass,
            notes,
        }
    }

    /// A check that could not be carried out.
    pub fn failed(name: &str, tolerance: f64, notes: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            points_evaluated: 0,
            max_abs_residual: f64::MAX,
            tolerance,
            pass: false,
            notes: notes.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            params: BTreeMap::new(),
            checks: vec![],
            pass: true,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.pass &= check.pass;
        self.checks.push(check);
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Pretty JSON with a trailing newline; floats use the shortest
    /// representation that round-trips.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
