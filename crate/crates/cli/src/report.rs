//! Report assembly and serialization. JSON output is deterministic: struct
//! field order is fixed and every collection is an ordered list.

use anyhow::{bail, Result};
use conevol_core::matroid::{IndexSet, LinearMatroid};
use conevol_core::polytope::dimension;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// 1-based index list for human-facing output.
pub fn indices_1based(s: IndexSet) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

#[derive(Debug, Serialize)]
pub struct ConfigSummary {
    pub n: usize,
    pub count: usize,
    pub components: usize,
    pub dimension: usize,
    pub flats: usize,
    pub bases: usize,
    pub circuits: usize,
}

impl ConfigSummary {
    pub fn new(m: &LinearMatroid) -> Result<Self> {
        Ok(ConfigSummary {
            n: m.n(),
            count: m.ground_size(),
            components: m.components().count(),
            dimension: dimension(m)?,
            flats: m.flats().len(),
            bases: m.bases().len(),
            circuits: m.circuits().len(),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub configuration: Option<ConfigSummary>,
    pub payload: Value,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed,
            passed: true,
            configuration: None,
            payload: Value::Null,
        }
    }

    pub fn with_configuration(mut self, m: &LinearMatroid) -> Result<Self> {
        self.configuration = Some(ConfigSummary::new(m)?);
        Ok(self)
    }

    pub fn with_payload<T: Serialize>(mut self, payload: &T) -> Result<Self> {
        self.payload = serde_json::to_value(payload)?;
        Ok(self)
    }

    pub fn with_passed(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected json|text|csv)")),
        }
    }
}

/// Serializes the report. CSV is restricted to tabular payloads: the payload
/// must carry a `csv` table (list of rows of strings) prepared by the
/// command.
pub fn emit(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(report)?)),
        Format::Text => Ok(render_text(report)),
        Format::Csv => {
            let Some(rows) = report.payload.get("csv").and_then(Value::as_array) else {
                bail!("csv output is only available for tabular payloads (eval)");
            };
            let mut out = String::new();
            for row in rows {
                let cells: Vec<String> = row
                    .as_array()
                    .map(|cells| {
                        cells
                            .iter()
                            .map(|c| c.as_str().map(str::to_string).unwrap_or_else(|| c.to_string()))
                            .collect()
                    })
                    .unwrap_or_default();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn render_value(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                if key == "csv" {
                    continue;
                }
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_value(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{key}: {v}\n")),
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                match v {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_value(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {v}\n")),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{value}\n")),
    }
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "conevol {} — {} (seed {})\n",
        report.version, report.command, report.seed
    ));
    if let Some(c) = &report.configuration {
        out.push_str(&format!(
            "configuration: n={} N={} components={} dim={} flats={} bases={} circuits={}\n",
            c.n, c.count, c.components, c.dimension, c.flats, c.bases, c.circuits
        ));
    }
    out.push_str(&format!("passed: {}\n", report.passed));
    render_value(&report.payload, 0, &mut out);
    out
}
