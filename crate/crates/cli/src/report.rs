//! Verification reports: per-check records with a deterministic serialized
//! form.
//!
//! Runtimes are measured and shown on the console, but the canonical report
//! file omits them (unless explicitly requested) so that identical
//! configurations produce byte-identical reports.

use std::time::Duration;

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Record {
    pub name: String,
    pub inputs: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    pub runtime: Duration,
}

impl Record {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn merge(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    /// Overall status: fail dominates, then inconclusive; skipped records do
    /// not block a pass (they are visible in the report).
    pub fn overall(&self) -> Status {
        if self.records.iter().any(|r| r.status == Status::Fail) {
            Status::Fail
        } else if self.records.iter().any(|r| r.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 4,
            Status::Skipped => 0,
        }
    }

    pub fn to_json(&self, config_summary: &str, timings: bool) -> Value {
        let records: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                let mut v = json!({
                    "name": r.name,
                    "inputs": r.inputs,
                    "expected": r.expected,
                    "computed": r.computed,
                    "status": r.status.as_str(),
                });
                if timings {
                    v["runtime_ms"] = json!(r.runtime.as_millis() as u64);
                }
                v
            })
            .collect();
        json!({
            "schema_version": 1,
            "config": config_summary,
            "overall": self.overall().as_str(),
            "records": records,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,status,expected,computed\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&r.name),
                r.status.as_str(),
                csv_field(&r.expected),
                csv_field(&r.computed)
            ));
        }
        out
    }

    pub fn print_console(&self) {
        for r in &self.records {
            println!(
                "[{}] {} (expected {}, computed {}, {} ms)",
                r.status.as_str(),
                r.name,
                r.expected,
                r.computed,
                r.runtime.as_millis()
            );
        }
        println!("overall: {}", self.overall().as_str());
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs a check body, timing it and capturing pass/fail from the returned
/// (expected, computed, ok) triple.
pub fn run_check(
    name: &str,
    inputs: &str,
    body: impl FnOnce() -> (String, String, Status),
) -> Record {
    let start = std::time::Instant::now();
    let (expected, computed, status) = body();
    Record {
        name: name.to_string(),
        inputs: inputs.to_string(),
        expected,
        computed,
        status,
        runtime: start.elapsed(),
    }
}

pub fn skipped(name: &str, inputs: &str, reason: &str) -> Record {
    Record {
        name: name.to_string(),
        inputs: inputs.to_string(),
        expected: "-".into(),
        computed: format!("skipped: {reason}"),
        status: Status::Skipped,
        runtime: Duration::ZERO,
    }
}
