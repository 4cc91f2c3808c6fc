//! Rendering of results: fixed-digit rows, CSV/JSON tables, the `F(n)`
//! checkpoint and the SVG scatter plot.

mod series;
mod svg;

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::precreal::{Bound, ErrReal};

pub use series::{f_series, load_checkpoint, FRow, SeriesOptions, CHECKPOINT_MAGIC};
pub use svg::{emit_figure1, render_figure1, RATIONALITY_LIMIT};

/// `0.5 * 10^-digits`, rounded up.
pub fn half_decimal_ulp(digits: usize) -> Bound {
    let x = 0.5 * 10f64.powi(-(digits as i32));
    // absorb the f64 rounding of 10^-digits
    Bound::from_f64(x).mul(&Bound::from_f64(1.0 + 1e-15))
}

/// `x` rendered at `digits` decimals together with an error bound that
/// covers both the interval radius and the decimal rounding.
pub fn render_real(x: &ErrReal, digits: usize) -> (String, String) {
    (x.render_fixed(digits), x.abs_err().add(&half_decimal_ulp(digits)).render())
}

/// Provenance written at the top of every output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputMeta {
    pub version: String,
    pub parse_id: String,
    pub config_hash: String,
}

impl OutputMeta {
    pub fn header_line(&self) -> String {
        format!("# irrbase {} parse={} config={}", self.version, self.parse_id, self.config_hash)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Int(i64),
    Text(String),
    Real { value: String, abs_err: String, precision_bits: usize },
}

impl Cell {
    pub fn real(x: &ErrReal, digits: usize) -> Cell {
        let (value, abs_err) = render_real(x, digits);
        Cell::Real { value, abs_err, precision_bits: x.precision_bits() }
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Plain,
    /// Rendered as `name`, `name_err` in CSV and `{value, abs_err, precision_bits}` in JSON.
    Real,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<(String, ColumnKind)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, ColumnKind)]) -> Table {
        Table { columns: columns.iter().map(|(n, k)| (n.to_string(), *k)).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    fn csv_header(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, kind) in &self.columns {
            out.push(name.clone());
            if *kind == ColumnKind::Real {
                out.push(format!("{name}_err"));
            }
        }
        out
    }

    fn csv_fields(&self, row: &[Cell]) -> Vec<String> {
        let mut out = Vec::new();
        for ((_, kind), cell) in self.columns.iter().zip(row) {
            match cell {
                Cell::Empty => out.push(String::new()),
                Cell::Int(i) => out.push(i.to_string()),
                Cell::Text(s) => out.push(s.clone()),
                Cell::Real { value, abs_err, .. } => {
                    out.push(value.clone());
                    out.push(abs_err.clone());
                    continue;
                }
            }
            if *kind == ColumnKind::Real {
                out.push(String::new());
            }
        }
        out
    }

    pub fn to_csv(&self, meta: &OutputMeta) -> String {
        let mut buf = Vec::new();
        writeln!(buf, "{}", meta.header_line()).expect("write to memory");
        {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
            w.write_record(self.csv_header()).expect("write to memory");
            for r in &self.rows {
                w.write_record(self.csv_fields(r)).expect("write to memory");
            }
            w.flush().expect("write to memory");
        }
        String::from_utf8(buf).expect("utf-8")
    }

    pub fn to_json_value(&self, meta: &OutputMeta) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for ((name, _), cell) in self.columns.iter().zip(r) {
                    let v = match cell {
                        Cell::Empty => Value::Null,
                        Cell::Int(i) => json!(i),
                        Cell::Text(s) => json!(s),
                        Cell::Real { value, abs_err, precision_bits } => {
                            json!({ "value": value, "abs_err": abs_err, "precision_bits": precision_bits })
                        }
                    };
                    m.insert(name.clone(), v);
                }
                Value::Object(m)
            })
            .collect();
        json!({
            "tool": "irrbase",
            "version": meta.version,
            "parse": meta.parse_id,
            "config": meta.config_hash,
            "columns": self.columns.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
            "rows": rows,
        })
    }

    pub fn to_json(&self, meta: &OutputMeta) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value(meta)).expect("json");
        s.push('\n');
        s
    }
}

/// Output format of tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidInput(format!("unknown format {s:?} (csv|json)"))),
        }
    }

    pub fn render(self, table: &Table, meta: &OutputMeta) -> String {
        match self {
            Format::Csv => table.to_csv(meta),
            Format::Json => table.to_json(meta),
        }
    }
}
