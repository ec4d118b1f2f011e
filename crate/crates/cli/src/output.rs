use std::collections::BTreeMap;
use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Result of a single evaluation.
#[derive(Debug, Serialize)]
pub struct Record {
    pub command: &'static str,
    pub inputs: BTreeMap<&'static str, Value>,
    #[serde(flatten)]
    pub fields: BTreeMap<&'static str, Value>,
    pub warnings: Vec<String>,
}

impl Record {
    pub fn new(command: &'static str) -> Self {
        Record { command, inputs: BTreeMap::new(), fields: BTreeMap::new(), warnings: Vec::new() }
    }

    pub fn input(mut self, key: &'static str, v: impl Into<Value>) -> Self {
        self.inputs.insert(key, v.into());
        self
    }

    pub fn field(mut self, key: &'static str, v: impl Into<Value>) -> Self {
        self.fields.insert(key, v.into());
        self
    }
}

/// Rows of strings under named columns; `notes` become comment lines in CSV.
#[derive(Debug, Serialize)]
pub struct Table {
    pub id: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: BTreeMap<&'static str, Value>,
    pub warnings: Vec<String>,
}

impl Table {
    pub fn new(id: impl Into<String>, columns: Vec<String>) -> Self {
        Table { id: id.into(), columns, rows: Vec::new(), notes: BTreeMap::new(), warnings: Vec::new() }
    }
}

pub const CSV_SCHEMA: &str = "# dphase-table v1";

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_csv(out: &mut impl Write, header: &[String], rows: &[Vec<String>]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()
}

pub fn emit_record(r: &Record, format: Format) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(r)?)?,
        Format::Csv => {
            writeln!(out, "{CSV_SCHEMA} {}", r.command)?;
            let rows: Vec<Vec<String>> = r
                .inputs
                .iter()
                .chain(r.fields.iter())
                .map(|(k, v)| vec![k.to_string(), plain(v)])
                .collect();
            write_csv(&mut out, &["key".into(), "value".into()], &rows)?;
        }
        Format::Text => {
            if let Some(v) = r.fields.get("value") {
                writeln!(out, "{}", plain(v))?;
            }
            for (k, v) in r.fields.iter().filter(|(k, _)| **k != "value") {
                writeln!(out, "{k}: {}", plain(v))?;
            }
        }
    }
    if format != Format::Json {
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(())
}

pub fn emit_table(t: &Table, format: Format) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(t)?)?,
        Format::Csv => {
            writeln!(out, "{CSV_SCHEMA} {}", t.id)?;
            for (k, v) in &t.notes {
                writeln!(out, "# {k}={}", plain(v))?;
            }
            write_csv(&mut out, &t.columns, &t.rows)?;
        }
        Format::Text => {
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.len()).collect();
            for r in &t.rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cells: &[String]| {
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
            };
            writeln!(out, "{}", line(&t.columns))?;
            for r in &t.rows {
                writeln!(out, "{}", line(r))?;
            }
            for (k, v) in &t.notes {
                writeln!(out, "{k}: {}", plain(v))?;
            }
        }
    }
    if format != Format::Json {
        for w in &t.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(())
}
