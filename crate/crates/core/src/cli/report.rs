use serde::Serialize;
use serde_json::{Map, Value};

use crate::dynamics::DriftReport;

#[derive(Debug, Clone, Serialize)]
pub struct ResultEntry {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term_count: Option<usize>,
    pub passed: bool,
}

impl ResultEntry {
    pub fn residual(id: impl Into<String>, residual: f64, passed: bool) -> Self {
        ResultEntry { id: id.into(), residual: Some(residual), term_count: None, passed }
    }

    pub fn terms(id: impl Into<String>, term_count: usize, passed: bool) -> Self {
        ResultEntry { id: id.into(), residual: None, term_count: Some(term_count), passed }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Map<String, Value>,
    pub results: Vec<ResultEntry>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftReport>,
}

impl Report {
    pub fn new(command: &str, config: Map<String, Value>, results: Vec<ResultEntry>) -> Self {
        let passed = results.iter().all(|r| r.passed);
        Report { command: command.to_string(), config, results, passed, notes: Vec::new(), drift: None }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialises");
        text.push('\n');
        text
    }
}
