//! Rectangular named-column datasets and their CSV / manifest / gnuplot renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::format_sig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Fully resolved parameter snapshot, values in round-trip precision.
    pub metadata: BTreeMap<String, String>,
}

impl SweepTable {
    pub fn new(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Validation(format!(
                "row has {} values but table `{}` has {} columns",
                row.len(),
                self.name,
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn column_at(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }

    /// CSV with a header row, LF line endings and 9-significant-digit values.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// A gnuplot script plotting every column against the first.
    pub fn gnuplot_script(&self, csv_file: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set key autotitle columnhead");
        let _ = writeln!(
            s,
            "set xlabel '{}'",
            self.columns.first().map(String::as_str).unwrap_or("")
        );
        let _ = writeln!(s, "set title '{}'", self.name);
        let series: Vec<String> = (2..=self.columns.len())
            .map(|i| format!("'{csv_file}' using 1:{i} with lines"))
            .collect();
        let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
        s
    }
}

/// Splits a legend column name `quantity@key=value` into its parts.
pub fn legend_of(column: &str) -> Option<(&str, &str, f64)> {
    let (quantity, legend) = column.split_once('@')?;
    let (key, value) = legend.split_once('=')?;
    Some((quantity, key, value.parse().ok()?))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Plain-text key/value manifest (TOML-compatible) mapping each dataset file
/// to its parameter snapshot.
pub fn render_manifest(entries: &[(String, &SweepTable)]) -> String {
    let mut s = String::from("# dataset manifest\n");
    for (file, table) in entries {
        let _ = writeln!(s, "\n[{}]", quote(&table.name));
        let _ = writeln!(s, "file = {}", quote(file));
        let _ = writeln!(s, "rows = {}", table.len());
        let _ = writeln!(s, "columns = {}", quote(&table.columns.join(",")));
        for (k, v) in &table.metadata {
            let _ = writeln!(s, "{} = {}", quote(k), quote(v));
        }
    }
    s
}
