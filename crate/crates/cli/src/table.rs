//! Output tables. CSV files start with `# key: value` metadata lines, then a
//! header row; every float is written with 12 significant digits.
//! JSON carries the same content as `{meta, columns, rows}`.

use crate::config::{fmt_num, Output};
use anyhow::Result;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "cmera-table/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // the formatted string round-trips, so JSON and CSV agree digit for digit
            Cell::Num(x) if x.is_finite() => serde_json::from_str(&fmt_num(*x)).unwrap(),
            Cell::Num(_) => Value::Null,
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str], config_echo: Vec<(String, String)>) -> Self {
        let mut meta = header(command);
        meta.extend(config_echo);
        Table {
            meta,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn render(&self, output: Output) -> Result<String> {
        Ok(match output {
            Output::Csv => {
                let mut out = String::new();
                for (k, v) in &self.meta {
                    out.push_str(&format!("# {k}: {v}\n"));
                }
                let mut w = csv::Writer::from_writer(vec![]);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv))?;
                }
                out.push_str(&String::from_utf8(w.into_inner()?)?);
                out
            }
            Output::Json => {
                let doc = serde_json::json!({
                    "meta": meta_object(&self.meta),
                    "columns": self.columns,
                    "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                });
                serde_json::to_string_pretty(&doc)? + "\n"
            }
        })
    }
}

pub fn header(command: &str) -> Vec<(String, String)> {
    vec![
        ("schema".into(), SCHEMA.into()),
        ("tool".into(), format!("cmera {}", env!("CARGO_PKG_VERSION"))),
        ("command".into(), command.into()),
        ("entropy_unit".into(), "nats".into()),
    ]
}

pub fn meta_object(meta: &[(String, String)]) -> Value {
    Value::Object(meta.iter().map(|(k, v)| (k.clone(), Value::from(v.clone()))).collect::<Map<_, _>>())
}

/// JSON fit report; `meta` comes first so the file opens with its header.
#[derive(Debug, Serialize)]
pub struct FitReport {
    pub meta: Value,
    pub exponent: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub n_points: usize,
    pub residual_norm: f64,
}

/// Read columns `xcol`, `ycol` of a table written by this tool (comment lines skipped).
pub fn read_series(text: &str, xcol: &str, ycol: &str) -> Result<Vec<(f64, f64)>> {
    use crate::config::config_err;
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let head = r.headers()?.clone();
    let find = |name: &str| head.iter().position(|h| h == name);
    let (Some(ix), Some(iy)) = (find(xcol), find(ycol)) else {
        return config_err(format!("input lacks columns '{xcol}' and/or '{ycol}' (has {:?})", head.iter().collect::<Vec<_>>()));
    };
    let mut out = vec![];
    for rec in r.records() {
        let rec = rec?;
        let num = |i: usize| rec.get(i).and_then(|v| v.trim().parse::<f64>().ok());
        match (num(ix), num(iy)) {
            (Some(x), Some(y)) => out.push((x, y)),
            _ => return config_err(format!("non-numeric row {:?}", rec.iter().collect::<Vec<_>>())),
        }
    }
    Ok(out)
}
