//! Structured reports: one canonical tree per command, serialized with
//! stable key order (serde_json maps are BTree-backed), plus a plain text
//! rendering. Numeric claims carry a `basis` tag naming what produced
//! them: a closed formula, a verified construction, a sufficient
//! criterion, an exhaustive search, or exact linear algebra.

use serde_json::{json, Map, Value};
use std::fmt::Write as _;

/// Provenance of a reported number or verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Formula,
    VerifiedConstruction,
    Criterion,
    Search,
    LinearAlgebra,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Formula => "formula",
            Basis::VerifiedConstruction => "verified-construction",
            Basis::Criterion => "criterion",
            Basis::Search => "search",
            Basis::LinearAlgebra => "linear-algebra",
        }
    }
}

/// Tagged numeric or textual claim.
pub fn claim(value: impl Into<Value>, basis: Basis) -> Value {
    json!({ "value": value.into(), "basis": basis.as_str() })
}

/// One command's report: echo of the command and inputs, result tree,
/// wall-clock duration.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub duration_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            inputs: Map::new(),
            results: Map::new(),
            duration_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    /// Everything except the duration; used for determinism checks.
    pub fn canonical_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": Value::Object(self.inputs.clone()),
            "results": Value::Object(self.results.clone()),
        })
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "duration_ms": self.duration_ms,
            "inputs": Value::Object(self.inputs.clone()),
            "results": Value::Object(self.results.clone()),
        })
    }

    pub fn render_structured(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  input {k}: {}", text_value(v));
        }
        for (k, v) in &self.results {
            render_entry(&mut out, 1, k, v);
        }
        let _ = writeln!(out, "  duration_ms: {}", self.duration_ms);
        out
    }
}

fn render_entry(out: &mut String, depth: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            // claims render inline
            if map.len() == 2 && map.contains_key("value") && map.contains_key("basis") {
                let _ = writeln!(
                    out,
                    "{pad}{key}: {} [{}]",
                    text_value(&map["value"]),
                    map["basis"].as_str().unwrap_or("?")
                );
                return;
            }
            let _ = writeln!(out, "{pad}{key}:");
            for (k2, v2) in map {
                render_entry(out, depth + 1, k2, v2);
            }
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}:");
            for item in items {
                match item {
                    Value::String(s) => {
                        let _ = writeln!(out, "{pad}  - {s}");
                    }
                    other => {
                        let _ = writeln!(out, "{pad}  - {}", text_value(other));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{key}: {}", text_value(other));
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
