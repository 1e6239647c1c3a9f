//! Tabular results and their JSON/CSV serializations.
//!
//! Floats are written with 17 significant digits (`{:.16e}`) in both formats so that a rerun
//! reproduces the file byte for byte; non-finite values become `null` in JSON and empty cells in CSV.

use clap::ValueEnum;
use gl3_core::{Cplx, Error, Result};
use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Null,
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

fn float_text(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

impl Cell {
    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(x) => float_text(*x).unwrap_or_else(|| "null".into()),
            Cell::Bool(b) => b.to_string(),
            Cell::Str(s) => serde_json::to_string(s).expect("strings serialize"),
            Cell::Null => "null".into(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(x) => float_text(*x).unwrap_or_default(),
            Cell::Bool(b) => b.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }
}

/// One command's result: named columns, rows, and run metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Table { command: command.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), meta: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.into(), value.into()));
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{{");
        let _ = writeln!(s, "  \"schema_version\": {SCHEMA_VERSION},");
        let _ = writeln!(s, "  \"command\": {},", Cell::Str(self.command.clone()).json());
        let _ = write!(s, "  \"meta\": {{");
        for (i, (k, v)) in self.meta.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(s, "{sep}\n    {}: {}", Cell::Str(k.clone()).json(), v.json());
        }
        let _ = writeln!(s, "{}}},", if self.meta.is_empty() { "" } else { "\n  " });
        let _ = write!(s, "  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let fields: Vec<String> = self.columns.iter().zip(row).map(|(c, v)| format!("{}: {}", Cell::Str(c.clone()).json(), v.json())).collect();
            let _ = write!(s, "{sep}\n    {{{}}}", fields.join(", "));
        }
        let _ = writeln!(s, "{}]", if self.rows.is_empty() { "" } else { "\n  " });
        let _ = writeln!(s, "}}");
        s
    }

    /// Header plus one record per row; the first column is `schema_version`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Format(e.to_string());
        let mut header = vec!["schema_version".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).map_err(err)?;
        for row in &self.rows {
            let mut rec = vec![SCHEMA_VERSION.to_string()];
            rec.extend(row.iter().map(Cell::csv));
            w.write_record(&rec).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }
}

/// `(re, im)` cells.
pub fn cplx(z: Cplx) -> [Cell; 2] {
    [Cell::Float(z.re), Cell::Float(z.im)]
}
