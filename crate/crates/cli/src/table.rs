use serde_json::{json, Map, Value as Json};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Flag(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

/// Shortest round-trip form, scientific outside [1e-3, 1e7).
fn format_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-3..1e7).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_num(*x),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => if *b { "1" } else { "0" }.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) | Cell::Empty => Json::Null,
            Cell::Text(s) => json!(s),
            Cell::Flag(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::config(format!("`format`: \"{s}\" is not csv or json"))),
        }
    }
}

/// Provenance written ahead of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub version: &'static str,
    pub scenario: String,
    pub seed: u64,
    pub sweep: String,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, header: &Header, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = format!(
                    "# mpfsim {} scenario={} seed={}\n# sweep {} [{}]\n{}\n",
                    header.version,
                    header.scenario,
                    header.seed,
                    header.sweep,
                    header.unit,
                    self.columns.join(",")
                );
                for row in &self.rows {
                    out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Json> = self
                    .rows
                    .iter()
                    .map(|r| Json::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect::<Map<_, _>>()))
                    .collect();
                let doc = json!({
                    "tool": "mpfsim",
                    "version": header.version,
                    "scenario": header.scenario,
                    "seed": header.seed,
                    "sweep": header.sweep,
                    "unit": header.unit,
                    "rows": rows,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("json renders");
                s.push('\n');
                s
            }
        }
    }
}
