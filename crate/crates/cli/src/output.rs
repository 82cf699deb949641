use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use arboreal_core::experiments::RunHeader;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Bare values for the terminal.
    Text,
    /// Per-row dump with a commented header.
    Csv,
    /// Header plus full report.
    Json,
}

#[derive(Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a subcommand produced, in every output shape.
pub struct Rendered {
    pub text: String,
    pub json: Value,
    pub table: Table,
    pub anchor: &'static str,
}

/// Stringified view of a serializable flag set.
pub fn flag_map(v: &impl Serialize) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    if let Ok(Value::Object(m)) = serde_json::to_value(v) {
        for (k, v) in m {
            let s = match v {
                Value::Null => continue,
                Value::String(s) => s,
                other => other.to_string(),
            };
            out.insert(k, s);
        }
    }
    out
}

fn render(r: &Rendered, header: &RunHeader, format: Format) -> std::io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Text => {
            buf.extend_from_slice(r.text.as_bytes());
            if !r.text.ends_with('\n') {
                buf.push(b'\n');
            }
        }
        Format::Json => {
            let doc = serde_json::json!({ "header": header, "report": r.json });
            serde_json::to_writer_pretty(&mut buf, &doc)?;
            buf.push(b'\n');
        }
        Format::Csv => {
            for (k, v) in flag_map(header) {
                if k != "flags" {
                    writeln!(buf, "# {k}: {v}")?;
                }
            }
            for (k, v) in &header.flags {
                writeln!(buf, "# flag {k}: {v}")?;
            }
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&r.table.headers)?;
            for row in &r.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(buf)
}

pub fn emit(r: &Rendered, header: &RunHeader, format: Format, out: Option<&Path>) -> std::io::Result<()> {
    let bytes = render(r, header, format)?;
    match out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().write_all(&bytes),
    }
}
