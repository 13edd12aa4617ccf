//! Table, CSV and JSON rendering.
//!
//! CSV output starts with `# key=value` metadata lines, the first of which is
//! always `# schema=<name>/v<version>`, followed by a fixed header row.

use clap::ValueEnum;
use qchiplet::histogram::RNG_ALGORITHM;
use qchiplet::Histogram;
use serde_json::{Map, Value};

use crate::error::CliResult;

pub const HISTOGRAM_SCHEMA: &str = "histogram/v1";
pub const HISTOGRAM_COLUMNS: [&str; 3] = ["label", "probability", "count"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// A histogram plus the metadata and summary fields that travel with it.
#[derive(Clone, Debug)]
pub struct Report {
    pub histogram: Histogram,
    pub meta: Vec<(&'static str, Value)>,
    /// Printed after the table (e.g. the QAE estimate and stats).
    pub summary: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn new(histogram: Histogram) -> Self {
        let meta = vec![
            ("rng", Value::from(RNG_ALGORITHM)),
            ("seed", Value::from(histogram.seed())),
            ("shots", Value::from(histogram.shots())),
        ];
        Self { histogram, meta, summary: Vec::new() }
    }

    pub fn meta(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.meta.push((key, value.into()));
        self
    }

    pub fn summary(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.summary.push((key, value.into()));
        self
    }
}

pub(crate) fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(report: &Report, format: Format) -> CliResult<String> {
    let h = &report.histogram;
    let counts = h.counts();
    match format {
        Format::Table => {
            let width = h.width().max(5);
            let mut out = String::new();
            for (k, v) in &report.meta {
                out.push_str(&format!("# {k}={}\n", plain(v)));
            }
            out.push_str(&format!("{:<width$}  {:>14}", "label", "probability"));
            if counts.is_some() {
                out.push_str(&format!("  {:>10}", "count"));
            }
            out.push('\n');
            for (i, label) in h.labels().iter().enumerate() {
                out.push_str(&format!("{label:<width$}  {:>14.10}", h.probabilities()[i]));
                if let Some(c) = counts {
                    out.push_str(&format!("  {:>10}", c[i]));
                }
                out.push('\n');
            }
            if !report.summary.is_empty() {
                let parts: Vec<String> = report.summary.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
                out.push_str(&format!("stats: {}\n", parts.join(" ")));
            }
            Ok(out)
        }
        Format::Csv => {
            let mut out = format!("# schema={HISTOGRAM_SCHEMA}\n");
            for (k, v) in report.meta.iter().chain(&report.summary) {
                out.push_str(&format!("# {k}={}\n", plain(v)));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(HISTOGRAM_COLUMNS)?;
            for (i, label) in h.labels().iter().enumerate() {
                let count = counts.map(|c| c[i].to_string()).unwrap_or_default();
                w.write_record([label.clone(), h.probabilities()[i].to_string(), count])?;
            }
            out.push_str(&String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv output is utf-8"));
            Ok(out)
        }
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("schema".into(), HISTOGRAM_SCHEMA.into());
            for (k, v) in report.meta.iter().chain(&report.summary) {
                obj.insert(k.to_string(), v.clone());
            }
            obj.insert("labels".into(), h.labels().into());
            obj.insert("probabilities".into(), h.probabilities().to_vec().into());
            obj.insert("counts".into(), counts.map(|c| Value::from(c.to_vec())).unwrap_or(Value::Null));
            Ok(serde_json::to_string_pretty(&Value::Object(obj))? + "\n")
        }
    }
}
