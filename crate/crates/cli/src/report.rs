//! Reports: the config echo, a numeric row table, per-item diagnostics and a
//! command-specific summary.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::CliError;

/// A work item that produced no row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// Position of the item in the resolved input list.
    pub item: usize,
    /// Resolved input (direction and level, cut vector, anchor, radius...).
    pub input: Vec<f64>,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: ExperimentConfig,
    pub columns: Vec<String>,
    /// One row per successful item, in input order; `null` in JSON stands for `+inf`.
    pub rows: Vec<Vec<f64>>,
    pub diagnostics: Vec<Diagnostic>,
    pub summary: serde_json::Value,
    pub wall_time_s: f64,
}

/// Column names with one entry per coordinate, e.g. `axis_names("u", 3)` is
/// `ux, uy, uz`.
pub fn axis_names(prefix: &str, dim: usize) -> Vec<String> {
    ["x", "y", "z"][..dim].iter().map(|a| format!("{prefix}{a}")).collect()
}

/// Rows and diagnostics collected in input order.
#[derive(Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn fail(&mut self, item: usize, input: Vec<f64>, error: impl ToString) {
        self.diagnostics.push(Diagnostic { item, input, error: error.to_string() });
    }

    /// Column `name` over all rows.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).expect("known column");
        self.rows.iter().map(|r| r[i]).collect()
    }
}

impl Report {
    pub fn new(config: ExperimentConfig, table: Table, summary: serde_json::Value, wall_time_s: f64) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            columns: table.columns,
            rows: table.rows,
            diagnostics: table.diagnostics,
            summary,
            wall_time_s,
        }
    }

    /// True when there was work to do and none of it produced a row.
    pub fn all_failed(&self) -> bool {
        self.rows.is_empty() && !self.diagnostics.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes `<command>.csv` and `<command>.json` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<(), CliError> {
        std::fs::create_dir_all(dir)?;
        let stem = self.config.command.name();
        self.write_csv(std::fs::File::create(dir.join(format!("{stem}.csv")))?)?;
        std::fs::write(dir.join(format!("{stem}.json")), self.to_json() + "\n")?;
        Ok(())
    }
}

/// `{min, max, mean, rel_spread}` of a list of values.
pub fn spread_summary(values: &[f64]) -> serde_json::Value {
    if values.is_empty() {
        return serde_json::Value::Null;
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    serde_json::json!({ "min": min, "max": max, "mean": mean, "rel_spread": (max - min) / mean })
}

pub fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}
