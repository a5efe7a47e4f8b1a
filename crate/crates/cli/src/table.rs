//! Result tables and their CSV / JSON sidecar serialization.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Conjunction of the subcommand's check predicates.
    pub passed: bool,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new(), passed: true }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Shortest decimal that parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn int(x: impl std::fmt::Display) -> String {
    x.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub library_version: String,
    pub cli_version: String,
    pub subcommand: String,
    pub seed: u64,
    pub check: bool,
    pub columns: Vec<String>,
    pub rows: usize,
    pub passed: bool,
    pub config: RunConfig,
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

impl Sidecar {
    pub fn new(subcommand: &str, seed: u64, check: bool, table: &Table, config: &RunConfig) -> Self {
        Sidecar {
            library_version: nearsphere::VERSION.to_string(),
            cli_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            seed,
            check,
            columns: table.columns.iter().map(|c| c.to_string()).collect(),
            rows: table.rows.len(),
            passed: table.passed,
            config: config.clone(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("sidecar serializes");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let s: Sidecar = serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("sidecar: {e}")))?;
        s.config.validate()?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, f64::INFINITY] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.0), "1.0");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![int(1), num(0.5)]);
        assert_eq!(t.to_csv_string(), "a,b\n1,0.5\n");
        assert_eq!(t.column("b").unwrap(), vec!["0.5"]);
    }
}
