//! Run reports and their JSON, CSV and plain-text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Outcome of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: BTreeMap<String, f64>,
    pub seed: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl RunReport {
    pub fn new(scenario: impl Into<String>, seed: u64) -> Self {
        Self {
            scenario: scenario.into(),
            parameters: BTreeMap::new(),
            results: BTreeMap::new(),
            seed,
            elapsed_ms: 0,
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: f64) -> &mut Self {
        self.results.insert(key.to_string(), value);
        self
    }

    /// Single JSON object with keys sorted at every level.
    pub fn to_json(&self) -> String {
        // serde_json's map is ordered by key, so going through Value sorts
        // the top-level fields too.
        let value = serde_json::to_value(self).expect("report is serializable");
        serde_json::to_string(&value).expect("value is serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad report: {e}")))
    }

    /// Header of result names, then one row at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.results.keys()).expect("in-memory write");
        w.write_record(self.results.values().map(|v| format!("{v:.11e}"))).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario  {}", self.scenario);
        let _ = writeln!(out, "seed      {}", self.seed);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let width = self.results.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in &self.results {
            let _ = writeln!(out, "{k:<width$}  {v:.12}");
        }
        let _ = writeln!(out, "elapsed   {} ms", self.elapsed_ms);
        out
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_table(),
            Format::Json => self.to_json() + "\n",
            Format::Csv => self.to_csv(),
        }
    }
}
