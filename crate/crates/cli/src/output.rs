//! Rendering of command results as JSON, CSV or an aligned text table.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// The result of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub summary: Map<String, Value>,
    pub table: Option<Table>,
    /// `Some(false)` makes the process exit with status 1.
    pub passed: Option<bool>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            summary: Map::new(),
            table: None,
            passed: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema_version".into(), SCHEMA_VERSION.into());
        m.insert("command".into(), self.command.into());
        if let Some(p) = self.passed {
            m.insert("passed".into(), p.into());
        }
        for (k, v) in &self.summary {
            m.insert(k.clone(), v.clone());
        }
        if let Some(t) = &self.table {
            let rows = t
                .rows
                .iter()
                .map(|r| Value::Object(t.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                .collect();
            m.insert("rows".into(), Value::Array(rows));
        }
        Value::Object(m)
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Csv => self.write_csv(out),
            Format::Table => self.write_table(out),
        }
    }

    fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match &self.table {
            Some(t) => {
                // Stdout stays plain CSV; the summary goes to stderr.
                let mut err = std::io::stderr().lock();
                if let Some(p) = self.passed {
                    writeln!(err, "passed: {p}")?;
                }
                for (k, v) in &self.summary {
                    writeln!(err, "{k}: {}", cell(v))?;
                }
                w.write_record(&t.columns)?;
                for r in &t.rows {
                    w.write_record(r.iter().map(cell))?;
                }
            }
            None => {
                w.write_record(["key", "value"])?;
                w.write_record(["schema_version", &SCHEMA_VERSION.to_string()])?;
                if let Some(p) = self.passed {
                    w.write_record(["passed", &p.to_string()])?;
                }
                for (k, v) in &self.summary {
                    w.write_record([k.as_str(), &cell(v)])?;
                }
            }
        }
        w.flush()
    }

    fn write_table(&self, out: &mut impl Write) -> std::io::Result<()> {
        if let Some(p) = self.passed {
            writeln!(out, "{}", if p { "PASS" } else { "FAIL" })?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "{k}: {}", cell(v))?;
        }
        if let Some(t) = &self.table {
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).chain([t.columns[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |vals: &[String]| {
                vals.iter()
                    .zip(&widths)
                    .map(|(v, w)| format!("{v:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&t.columns))?;
            for r in &cells {
                writeln!(out, "{}", line(r))?;
            }
        }
        Ok(())
    }
}

/// Plain text of a JSON value; strings lose their quotes.
pub fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// A float as JSON; non-finite values become strings so the output stays valid.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(x.to_string()), Value::Number)
}
