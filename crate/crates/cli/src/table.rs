use serde::Deserialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Named real columns, one row per sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "ragged row");
        self.rows.push(row);
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: f64) {
        self.rows[row][col] = value;
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn emit(&self, format: Format, mode: &str) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(mode),
        }
    }

    /// Header line then one line per row, values in `{:.16e}` (17
    /// significant digits, enough to round-trip any finite double).
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Non-finite values become `null`.
    pub fn to_json(&self, mode: &str) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, &v) in self.columns.iter().zip(row) {
                    m.insert(c.clone(), Value::from(v));
                }
                Value::Object(m)
            })
            .collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "mode": mode,
            "columns": self.columns,
            "records": records,
        });
        let mut s = doc.to_string();
        s.push('\n');
        s
    }

    pub fn parse_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.split('\n');
        let header = lines.next().ok_or("missing header")?;
        let columns: Vec<String> =
            if header.is_empty() { Vec::new() } else { header.split(',').map(str::to_owned).collect() };
        let mut table = Self::new(columns);
        for (n, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 2)))
                .collect::<Result<Vec<f64>, String>>()?;
            if row.len() != table.columns.len() {
                return Err(format!("line {}: expected {} cells, found {}", n + 2, table.columns.len(), row.len()));
            }
            table.rows.push(row);
        }
        Ok(table)
    }
}
