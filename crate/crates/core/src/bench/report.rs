use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::BenchError;

pub const CSV_HEADER: &str = "kernel,strategy,threads,size,median_time_ms,speedup,verified,misspeculations,swaps";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verified {
    Exact,
    /// Not bitwise equal; largest scaled error within tolerance.
    WithinTol(f64),
    Failed,
}

impl fmt::Display for Verified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verified::Exact => f.write_str("exact"),
            Verified::WithinTol(e) => write!(f, "within_tol({e})"),
            Verified::Failed => f.write_str("FAILED"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub kernel: String,
    pub strategy: String,
    pub threads: usize,
    pub size: usize,
    pub median_time_ms: f64,
    pub speedup: f64,
    pub verified: Verified,
    pub misspeculations: usize,
    pub swaps: usize,
}

impl RunRow {
    fn fields(&self) -> [String; 9] {
        [
            self.kernel.clone(),
            self.strategy.clone(),
            self.threads.to_string(),
            self.size.to_string(),
            self.median_time_ms.to_string(),
            self.speedup.to_string(),
            self.verified.to_string(),
            self.misspeculations.to_string(),
            self.swaps.to_string(),
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub rows: Vec<RunRow>,
}

impl RunReport {
    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.verified == Verified::Failed)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            _ => Err(BenchError::Usage(format!("unknown format `{s}`"))),
        }
    }
}

/// Renders a report; every line, including the last, ends with a newline.
pub fn emit(report: &RunReport, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for row in &report.rows {
                out.push_str(&row.fields().join(","));
                out.push('\n');
            }
        }
        Format::Markdown => {
            let cols: Vec<&str> = CSV_HEADER.split(',').collect();
            let _ = writeln!(out, "| {} |", cols.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(cols.len()));
            for row in &report.rows {
                let _ = writeln!(out, "| {} |", row.fields().join(" | "));
            }
        }
    }
    out
}
