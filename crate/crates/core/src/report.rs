//! The uniform result record of every audit.
//!
//! Reports serialize to JSON with keys in lexicographic order at every level,
//! so two runs with identical inputs produce identical bytes. Floats are
//! written in shortest round-trip form.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    ConsistentUpToConstant,
    Coincide,
    Distinct,
    Inconclusive,
    NotApplicable,
}

impl Verdict {
    pub const ALL: [Verdict; 7] = [
        Verdict::Pass,
        Verdict::Fail,
        Verdict::ConsistentUpToConstant,
        Verdict::Coincide,
        Verdict::Distinct,
        Verdict::Inconclusive,
        Verdict::NotApplicable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ConsistentUpToConstant => "CONSISTENT_UP_TO_CONSTANT",
            Verdict::Coincide => "COINCIDE",
            Verdict::Distinct => "DISTINCT",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        }
    }

    /// Verdicts that make a batch run exit with status 1.
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Distinct)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fields are declared in serialization order, which is also key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub measured: Vec<f64>,
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub provenance: String,
    pub ratio_or_residual: f64,
    pub reference: Vec<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl AuditReport {
    pub fn new(name: impl Into<String>, provenance: impl Into<String>) -> Self {
        AuditReport {
            measured: Vec::new(),
            name: name.into(),
            params: BTreeMap::new(),
            provenance: provenance.into(),
            ratio_or_residual: 0.0,
            reference: Vec::new(),
            tolerance: 0.0,
            verdict: Verdict::Inconclusive,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn to_value(&self) -> serde_json::Value {
        // Value maps are ordered, so keys come out sorted whatever the struct order.
        serde_json::to_value(self).expect("report fields are always serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("value serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Several reports as one JSON array, in the given order.
pub fn reports_to_json(reports: &[AuditReport]) -> String {
    let values: Vec<serde_json::Value> = reports.iter().map(AuditReport::to_value).collect();
    serde_json::to_string_pretty(&values).expect("value serializes")
}

pub const CSV_HEADER: [&str; 8] = [
    "name",
    "verdict",
    "ratio_or_residual",
    "tolerance",
    "provenance",
    "measured",
    "reference",
    "params",
];

/// One CSV row per report. List cells are `;`-separated, params are `key=value;…`.
pub fn reports_to_csv(reports: &[AuditReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in reports {
        let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.name.clone(),
            r.verdict.to_string(),
            r.ratio_or_residual.to_string(),
            r.tolerance.to_string(),
            r.provenance.clone(),
            join(&r.measured),
            join(&r.reference),
            params,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

/// JSON schema every serialized report validates against.
pub const SCHEMA: &str = include_str!("../schema/audit_report.schema.json");
