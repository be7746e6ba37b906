//! Tables of sampled curves and their CSV / JSON encodings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub name: String,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldTable {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub branches: Vec<Branch>,
}

/// 17 significant digits: enough to reproduce every `f64` exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl FieldTable {
    pub fn new(header: Vec<(String, String)>, columns: &[&str]) -> Self {
        let mut full = vec![("version".to_string(), CODE_VERSION.to_string())];
        full.extend(header);
        Self {
            header: full,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            branches: Vec::new(),
        }
    }

    pub fn push_branch(&mut self, name: impl Into<String>, rows: Vec<Vec<f64>>) {
        self.branches.push(Branch {
            name: name.into(),
            rows,
        });
    }

    pub fn branch(&self, name: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for b in &self.branches {
            let _ = writeln!(out, "# branch={}", b.name);
            for row in &b.rows {
                let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    /// Reads back the CSV encoding.
    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut header = Vec::new();
        let mut columns = None;
        let mut branches: Vec<Branch> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix("# ") {
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
                if k == "branch" {
                    branches.push(Branch {
                        name: v.to_string(),
                        rows: Vec::new(),
                    });
                } else {
                    header.push((k.to_string(), v.to_string()));
                }
            } else if columns.is_none() {
                columns = Some(line.split(',').map(str::to_string).collect());
            } else {
                let row = line
                    .split(',')
                    .map(|c| c.parse::<f64>().map_err(|e| format!("line {}: {e}", i + 1)))
                    .collect::<Result<Vec<_>, _>>()?;
                branches
                    .last_mut()
                    .ok_or_else(|| format!("line {}: row before any branch", i + 1))?
                    .rows
                    .push(row);
            }
        }
        Ok(Self {
            header,
            columns: columns.ok_or("missing column line")?,
            branches,
        })
    }
}
