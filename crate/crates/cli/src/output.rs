//! Tabular output in CSV or JSON with `%.12g` number formatting.
//!
//! JSON numbers are parsed back from the formatted text, so a CSV and a JSON
//! run of the same configuration carry identical values.

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// C `%.{sig}g` formatting.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sig = sig.max(1);
    // The exponent after rounding to `sig` digits decides the style.
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_g(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

/// The value a reader of the CSV text recovers.
pub fn rounded(x: f64) -> f64 {
    format_g(x).parse().unwrap_or(f64::NAN)
}

pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(rounded(x)).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A cell is either a number or missing (errored row).
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_g(*x),
            Cell::Text(s) => s.clone(),
            Cell::Missing => "nan".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json_number(*x),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, cells: Vec<Cell>, error: Option<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(Row { cells, error });
    }

    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Usage(format!("failed to encode CSV: {e}"));
        writer.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            writer.write_record(row.cells.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::Usage(format!("failed to encode CSV: {e}")))?;
        Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
    }

    /// Rows as objects keyed by column name; errored rows carry an `error` key.
    pub fn json_rows(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.columns.iter().zip(&row.cells) {
                    obj.insert(name.clone(), cell.json());
                }
                if let Some(e) = &row.error {
                    obj.insert("error".into(), Value::String(e.clone()));
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// The single top-level JSON document.
pub fn json_document(config: Value, rows: Value, summary: Value) -> String {
    let mut doc = Map::new();
    doc.insert("config".into(), config);
    doc.insert("rows".into(), rows);
    doc.insert("summary".into(), summary);
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    text.push('\n');
    text
}
