//! Deterministic JSON and CSV rendering of flat records.

use std::fmt::Write as _;

use serde_json::{Map, Value};

/// One field value. Reals are printed with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    /// Not applicable: JSON `null`, empty CSV cell.
    Empty,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

pub fn real(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Int(i) => i.to_string(),
            Field::Real(v) => real(*v),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(i) => Value::from(*i),
            Field::Bool(b) => Value::from(*b),
            Field::Empty => Value::Null,
            Field::Real(_) | Field::Text(_) => Value::String(self.text()),
        }
    }
}

/// Ordered key/value pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(String, Field)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Field>) {
        self.0.push((key.to_string(), value.into()));
    }

    fn get(&self, key: &str) -> Option<&Field> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command's full output: records plus free-form notes.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub notes: Vec<String>,
    pub records: Vec<Record>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => csv(&self.records),
        }
    }

    fn json(&self) -> String {
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.clone()));
        if !self.notes.is_empty() {
            top.insert(
                "notes".into(),
                Value::Array(self.notes.iter().cloned().map(Value::String).collect()),
            );
        }
        let records = self
            .records
            .iter()
            .map(|r| Value::Object(r.0.iter().map(|(k, v)| (k.clone(), v.json())).collect()))
            .collect();
        top.insert("records".into(), Value::Array(records));
        let mut out = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
        out.push('\n');
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header from the union of keys in first-seen order; missing cells stay empty.
pub fn csv(records: &[Record]) -> String {
    let mut keys: Vec<&str> = Vec::new();
    for r in records {
        for (k, _) in &r.0 {
            if !keys.contains(&k.as_str()) {
                keys.push(k);
            }
        }
    }
    let mut out = String::new();
    out.push_str(
        &keys
            .iter()
            .map(|k| csv_cell(k))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for r in records {
        let row: Vec<String> = keys
            .iter()
            .map(|k| r.get(k).map(|v| csv_cell(&v.text())).unwrap_or_default())
            .collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}
