//! Report envelope and CSV/JSON emission.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use crate::config::{ExperimentConfig, Format};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v) if v.is_nan() => "nan".into(),
            Cell::Num(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            // 17 significant digits
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Text(String::new()), Cell::Num)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportEnvelope {
    pub command: String,
    /// Effective configuration, `section -> key -> value`.
    pub config: Value,
    /// Seconds since the Unix epoch; not part of the reproducible output.
    pub generated_at: u64,
    pub payload: Value,
    pub constants: Value,
    pub exit_code: i32,
    pub table: Table,
}

impl ReportEnvelope {
    pub fn new(cfg: &ExperimentConfig, payload: Value, constants: Value, exit_code: i32, table: Table) -> Self {
        let generated_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: cfg.command.name().into(),
            config: serde_json::to_value(&cfg.echo).unwrap_or(Value::Null),
            generated_at,
            payload,
            constants,
            exit_code,
            table,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tool": "markov-orlicz",
            "version": TOOL_VERSION,
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "generated_at": self.generated_at,
            "payload": self.payload,
            "constants": self.constants,
            "exit_code": self.exit_code,
        })
    }
}

/// Recursively orders object keys. `serde_json` maps are already ordered;
/// this keeps the output sorted should that ever change.
fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k, sorted(v));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        other => other,
    }
}

pub fn render_json(report: &ReportEnvelope) -> String {
    let mut s = serde_json::to_string_pretty(&sorted(report.to_json())).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn render_csv(table: &Table) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

/// Output files for a base path: the path itself for one format, the path
/// with `.csv` and `.json` extensions for both.
pub fn output_paths(path: &Path, format: Format) -> Vec<(Format, PathBuf)> {
    match format {
        Format::Both => vec![
            (Format::Csv, path.with_extension("csv")),
            (Format::Json, path.with_extension("json")),
        ],
        f => vec![(f, path.to_path_buf())],
    }
}

/// Writes the report in `format` to `path`, or to stdout without a path.
pub fn emit(report: &ReportEnvelope, format: Format, path: Option<&Path>) -> io::Result<()> {
    let render = |f: Format| -> io::Result<Vec<u8>> {
        match f {
            Format::Csv => render_csv(&report.table),
            _ => Ok(render_json(report).into_bytes()),
        }
    };
    match path {
        Some(p) => {
            for (f, file) in output_paths(p, format) {
                std::fs::write(file, render(f)?)?;
            }
        }
        None => {
            let mut out = io::stdout().lock();
            let formats: &[Format] = match format {
                Format::Both => &[Format::Csv, Format::Json],
                Format::Csv => &[Format::Csv],
                Format::Json => &[Format::Json],
            };
            for f in formats {
                out.write_all(&render(*f)?)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportEnvelope {
        let mut table = Table::new(&["name", "value", "n"]);
        table.push(vec!["a".into(), 0.1.into(), 3usize.into()]);
        table.push(vec!["b".into(), f64::INFINITY.into(), 4usize.into()]);
        ReportEnvelope {
            command: "norm".into(),
            config: json!({"b": {"z": "1", "a": "2"}}),
            generated_at: 0,
            payload: json!({"zeta": 1.0, "alpha": [0.1, 2.5e-300]}),
            constants: json!({}),
            exit_code: 0,
            table,
        }
    }

    #[test]
    fn csv_has_fixed_schema_and_17_digits() {
        let s = String::from_utf8(render_csv(&sample().table).unwrap()).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "name,value,n");
        assert_eq!(lines[1], "a,1.0000000000000001e-1,3");
        assert_eq!(lines[2], "b,inf,4");
        let back: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn json_is_sorted_stable_and_lossless() {
        let r = sample();
        let a = render_json(&r);
        assert_eq!(a, render_json(&r));
        assert!(a.find("\"command\"").unwrap() < a.find("\"config\"").unwrap());
        assert!(a.find("\"alpha\"").unwrap() < a.find("\"zeta\"").unwrap());
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["payload"]["alpha"][1].as_f64().unwrap(), 2.5e-300);
        assert_eq!(v, sorted(r.to_json()));
    }
}
