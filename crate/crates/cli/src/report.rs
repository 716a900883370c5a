//! Tabular output with a reproducibility header, as CSV or JSON.
//!
//! CSV files start with `# key: value` comment lines (tool version, command,
//! seed, every parameter, units of each column, run summary) followed by a
//! header row and the data rows. JSON files carry the same information as
//! `meta`, `summary` and `records` objects.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const TOOL: &str = "ini";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    /// Written with the shortest round-trip decimal form.
    Float(f64),
    /// Written in scientific notation (MSE values span many decades).
    Sci(f64),
    Text(String),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Sci(v) => format!("{v:e}"),
            Cell::Text(s) => csv_escape(s),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) | Cell::Sci(v) => float_json(*v),
            Cell::Text(s) => json!(s),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Non-finite values (an exact null has infinite rejection) become strings.
pub fn float_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub seed: Option<u64>,
    pub params: Vec<(String, String)>,
    /// Column name and unit description.
    pub columns: Vec<(&'static str, &'static str)>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
    /// Replaces the table rows in JSON output when the records have nested
    /// structure that CSV flattens.
    pub json_records: Option<Vec<Value>>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<(&'static str, &'static str)>) -> Self {
        Self {
            command,
            seed: None,
            params: Vec::new(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            json_records: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "# {TOOL} {VERSION}")?;
        writeln!(out, "# command: {}", self.command)?;
        if let Some(seed) = self.seed {
            writeln!(out, "# seed: {seed}")?;
        }
        for (k, v) in &self.params {
            writeln!(out, "# param {k}: {v}")?;
        }
        for (name, unit) in &self.columns {
            writeln!(out, "# unit {name}: {unit}")?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "# summary {k}: {}", v.csv())?;
        }
        let names: Vec<&str> = self.columns.iter().map(|(n, _)| *n).collect();
        writeln!(out, "{}", names.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn table_records(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let rec: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|((n, _), c)| (n.to_string(), c.json()))
                    .collect();
                Value::Object(rec)
            })
            .collect()
    }

    fn to_json(&self) -> Value {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let units: Map<String, Value> = self.columns.iter().map(|(n, u)| (n.to_string(), json!(u))).collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
        let records: Vec<Value> = match &self.json_records {
            Some(r) => r.clone(),
            None => self.table_records(),
        };
        json!({
            "meta": {
                "tool": TOOL,
                "version": VERSION,
                "command": self.command,
                "seed": self.seed,
                "params": params,
                "units": units,
            },
            "summary": summary,
            "records": records,
        })
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", vec![("x", "bins"), ("y", "linear")]);
        r.seed = Some(7);
        r.param("n", 3);
        r.push_row(vec![Cell::from(1u64), Cell::Sci(2.5e-7)]);
        r.push_row(vec![Cell::from("a,b"), Cell::Missing]);
        r.summary.push(("max", Cell::Float(f64::INFINITY)));
        r
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "# command: demo");
        assert_eq!(lines[2], "# seed: 7");
        assert!(lines.contains(&"# unit y: linear"));
        assert!(lines.contains(&"# summary max: inf"));
        assert_eq!(&lines[lines.len() - 3..], ["x,y", "1,2.5e-7", "\"a,b\","]);
    }

    #[test]
    fn json_layout() {
        let mut buf = Vec::new();
        sample().write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["meta"]["seed"], 7);
        assert_eq!(v["meta"]["params"]["n"], "3");
        assert_eq!(v["records"][0]["y"], 2.5e-7);
        assert_eq!(v["records"][1]["y"], Value::Null);
        assert_eq!(v["summary"]["max"], "inf");
        let keys: Vec<&String> = v["records"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["x", "y"]);
    }
}
