//! Versioned JSON and CSV reports.
//!
//! JSON has no infinities, so non-finite numbers are written as the strings
//! `"inf"`, `"-inf"` and `"nan"`. CSV cells use the same spelling.

use serde_json::{Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A number, with non-finite values spelled as strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Inverse of [`num`].
pub fn parse_num(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Object(Map<String, Value>),
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<Value>>,
        meta: Map<String, Value>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub body: Body,
}

impl Report {
    pub fn object(command: &str, fields: Map<String, Value>) -> Self {
        Report {
            command: command.into(),
            body: Body::Object(fields),
        }
    }

    pub fn table(command: &str, columns: &[&str], rows: Vec<Vec<Value>>, meta: Map<String, Value>) -> Self {
        Report {
            command: command.into(),
            body: Body::Table {
                columns: columns.iter().map(|c| c.to_string()).collect(),
                rows,
                meta,
            },
        }
    }

    /// Tables default to CSV, everything else to JSON.
    pub fn default_format(&self) -> Format {
        match self.body {
            Body::Object(_) => Format::Json,
            Body::Table { .. } => Format::Csv,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("command".into(), Value::String(self.command.clone()));
        match &self.body {
            Body::Object(fields) => out.extend(fields.clone()),
            Body::Table { columns, rows, meta } => {
                out.extend(meta.clone());
                out.insert("columns".into(), columns.clone().into());
                out.insert("rows".into(), Value::Array(rows.iter().cloned().map(Value::Array).collect()));
            }
        }
        Value::Object(out)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports are plain JSON values");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, rec: Vec<String>| w.write_record(rec).expect("writes to memory");
        match &self.body {
            Body::Object(fields) => {
                write(&mut w, vec!["field".into(), "value".into()]);
                for (k, v) in fields {
                    write(&mut w, vec![k.clone(), cell(v)]);
                }
            }
            Body::Table { columns, rows, .. } => {
                write(&mut w, columns.clone());
                for r in rows {
                    write(&mut w, r.iter().map(cell).collect());
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory buffer")).expect("CSV of UTF-8 cells")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}
