//! CSV and JSON rendering with a metadata header.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.12e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Table(Table),
    Json(Value),
}

/// Result of one subcommand, ready to render.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub command: &'static str,
    pub figure: Option<&'static str>,
    /// Resolved inputs; hashed into the header.
    pub scenario: Value,
    /// Derived quantities reported alongside the data.
    pub extra: Map<String, Value>,
    pub body: Body,
}

impl Artifact {
    pub fn new(command: &'static str, scenario: Value, body: Body) -> Self {
        Self {
            command,
            figure: None,
            scenario,
            extra: Map::new(),
            body,
        }
    }

    pub fn with_extra(mut self, key: &str, value: Value) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn default_format(&self) -> Format {
        match self.body {
            Body::Table(_) => Format::Csv,
            Body::Json(_) => Format::Json,
        }
    }
}

/// Hex SHA-256 of the compact JSON text of `scenario` (keys sorted).
pub fn scenario_hash(scenario: &Value) -> String {
    let text = serde_json::to_string(scenario).expect("JSON values always serialise");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn metadata(a: &Artifact, deterministic: bool) -> Value {
    let mut m = Map::new();
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(a.command));
    m.insert("figure".into(), json!(a.figure));
    m.insert("scenario_hash".into(), json!(scenario_hash(&a.scenario)));
    m.insert("scenario".into(), a.scenario.clone());
    for (k, v) in &a.extra {
        m.insert(k.clone(), v.clone());
    }
    if !deterministic {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        m.insert("generated_unix_s".into(), json!(now));
    }
    Value::Object(m)
}

pub fn render(a: &Artifact, format: Format, deterministic: bool) -> Result<String, CliError> {
    let meta = metadata(a, deterministic);
    match (&a.body, format) {
        (Body::Table(t), Format::Csv) => {
            let mut out = format!("# {}\n", serde_json::to_string(&meta).expect("serialisable"));
            out.push_str(&t.columns.join(","));
            out.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        (Body::Table(t), Format::Json) => {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                .collect();
            let v = json!({ "metadata": meta, "columns": t.columns, "rows": rows });
            Ok(pretty(&v))
        }
        (Body::Json(v), Format::Json) => Ok(pretty(&json!({ "metadata": meta, "result": v }))),
        (Body::Json(_), Format::Csv) => Err(CliError::Config(format!(
            "`{}` emits JSON only; drop --format csv",
            a.command
        ))),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// Writes to `path`, or to standard output when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Artifact {
        let mut t = Table::new(&["x", "n", "label"]);
        t.push(vec![0.1.into(), 3usize.into(), "a".into()]);
        Artifact::new("test", json!({"b": 1, "a": 2}), Body::Table(t))
    }

    #[test]
    fn csv_layout() {
        let s = render(&sample(), Format::Csv, true).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# {"));
        assert_eq!(lines[1], "x,n,label");
        assert_eq!(lines[2], "1.000000000000e-1,3,a");
        let meta: Value = serde_json::from_str(&lines[0][2..]).unwrap();
        assert_eq!(meta["command"], "test");
        assert!(meta.get("generated_unix_s").is_none());
    }

    #[test]
    fn hash_ignores_key_order() {
        let a = json!({"a": 1.5, "b": [1, 2]});
        let b: Value = serde_json::from_str(r#"{"b":[1,2],"a":1.5}"#).unwrap();
        assert_eq!(scenario_hash(&a), scenario_hash(&b));
        assert_eq!(scenario_hash(&a).len(), 64);
    }

    #[test]
    fn json_body_rejects_csv() {
        let a = Artifact::new("regime", json!({}), Body::Json(json!({"x": 1})));
        assert!(matches!(render(&a, Format::Csv, true), Err(CliError::Config(_))));
        assert!(render(&a, Format::Json, false).unwrap().contains("generated_unix_s"));
    }
}
