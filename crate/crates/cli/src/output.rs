use std::io::Write;

use clap::ValueEnum;
use num_rational::Rational64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Rows for the csv and table renderings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// One command's result, before rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub algebra: String,
    pub levels: Value,
    pub tolerances: Value,
    pub payload: Map<String, Value>,
    pub table: Table,
    /// Replaces `table` in the table rendering.
    pub display: Option<Table>,
    /// Free-text lines printed under the table rendering.
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(algebra: String, levels: Value) -> Self {
        Self {
            algebra,
            levels,
            tolerances: json!({}),
            payload: Map::new(),
            table: Table::default(),
            display: None,
            notes: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.payload.insert(key.to_string(), value);
    }

    pub fn envelope(&self) -> Value {
        json!({
            "tool": "cosetmod",
            "version": env!("CARGO_PKG_VERSION"),
            "algebra": self.algebra,
            "levels": self.levels,
            "tolerances": self.tolerances,
            "payload": Value::Object(self.payload.clone()),
            "warnings": self.warnings,
        })
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.envelope())?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.table.headers)?;
                for row in &self.table.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Table => {
                write_aligned(out, self.display.as_ref().unwrap_or(&self.table))?;
                for n in &self.notes {
                    writeln!(out, "{n}")?;
                }
                Ok(())
            }
        }
    }
}

fn write_aligned(out: &mut dyn Write, t: &Table) -> std::io::Result<()> {
    let cols = t.headers.len();
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
    for row in &t.rows {
        for (i, cell) in row.iter().enumerate().take(cols) {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    if !t.headers.is_empty() {
        writeln!(out, "{}", line(&t.headers))?;
    }
    for row in &t.rows {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}

/// Rounds to 12 significant digits; magnitudes below `1e-13` print as zero.
pub fn round12(x: f64) -> f64 {
    if x.abs() < 1e-13 {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn num(x: f64) -> Value {
    json!(round12(x))
}

pub fn fmt_float(x: f64) -> String {
    round12(x).to_string()
}

pub fn complex_value(re: f64, im: f64) -> Value {
    json!([round12(re), round12(im)])
}

pub fn fmt_complex(re: f64, im: f64) -> String {
    let (re, im) = (round12(re), round12(im));
    if im == 0.0 {
        re.to_string()
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

pub fn rational(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
