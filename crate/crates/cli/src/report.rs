//! Deterministic JSON reports. Struct field order and `BTreeMap`-backed
//! objects make serialization byte-stable; wall-clock times are only
//! included when explicitly requested, since they would break
//! byte-for-byte reproducibility of report files.

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

use ptwist_core::dgmodule::Morphism;

pub const TOOL: &str = "ptwist";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Serialize)]
pub struct TaskRecord {
    pub task: String,
    pub inputs: Value,
    pub verdict: Verdict,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statement: Option<String>,
    pub field: String,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub tasks: Vec<TaskRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0 && self.summary.inconclusive == 0
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub scenarios: Vec<Report>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0 && self.summary.inconclusive == 0
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn dims_value(dims: &BTreeMap<i64, usize>) -> Value {
    serde_json::to_value(dims).expect("dims serialize")
}

/// Witness matrices in reports: generator lists, degree, and the entry
/// matrix as rows of `coeff*basis` term lists.
pub fn morphism_value(f: &Morphism) -> Value {
    let gens = |m: &ptwist_core::ModuleRef| -> Value {
        Value::Array(
            m.generators()
                .iter()
                .map(|g| serde_json::json!({ "name": g.name, "degree": g.degree }))
                .collect(),
        )
    };
    let mut rows = Vec::with_capacity(f.target().rank());
    for i in 0..f.target().rank() {
        let mut row = Vec::with_capacity(f.source().rank());
        for j in 0..f.source().rank() {
            let e = f.entry(i, j);
            let mut terms = Vec::new();
            for (k, c) in e.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    terms.push(serde_json::json!({
                        "coeff": c.to_string(),
                        "basis": e.algebra().basis()[k].name,
                    }));
                }
            }
            row.push(Value::Array(terms));
        }
        rows.push(Value::Array(row));
    }
    serde_json::json!({
        "source": gens(f.source()),
        "target": gens(f.target()),
        "degree": f.degree(),
        "entries": Value::Array(rows),
    })
}
