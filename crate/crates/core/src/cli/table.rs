//! Tabular results with a metadata header, written as CSV or JSON.
//!
//! Floats are printed with 17 significant digits in both encodings, from the
//! same formatter, so the numeric payloads are identical byte for byte.

use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { metadata: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta_float(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta(key, format_float(value))
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Float(f) => format_float(*f),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let s = |v: &str| serde_json::to_string(v).expect("string serialises");
        let mut out = String::from("{\n  \"metadata\": {");
        for (i, (k, v)) in self.metadata.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(out, "{sep}\n    {}: {}", s(k), s(v));
        }
        out.push_str("\n  },\n  \"columns\": [");
        out.push_str(&self.columns.iter().map(|c| s(c)).collect::<Vec<_>>().join(", "));
        out.push_str("],\n  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    // JSON has no NaN/inf; rows are checked finite before writing.
                    Cell::Float(f) => format_float(*f),
                    Cell::Text(t) => s(t),
                    Cell::Empty => "null".to_string(),
                })
                .collect();
            let _ = write!(out, "{sep}\n    [{}]", cells.join(", "));
        }
        out.push_str("\n  ]\n}\n");
        out
    }

    pub fn all_finite(&self) -> bool {
        self.rows.iter().flatten().all(|c| !matches!(c, Cell::Float(f) if !f.is_finite()))
    }
}
