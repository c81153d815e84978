//! CSV and JSON emitters.
//!
//! CSV numbers carry 17 significant digits, which is enough to round-trip
//! any `f64`; JSON uses the shortest representation that round-trips.

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One CSV cell: 17 significant digits, `NA` for a missing value.
pub fn csv_number(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.16e}"),
        None => "NA".to_string(),
    }
}

/// Rows of numbers under a fixed header, LF line endings.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<Option<f64>>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let cells: Vec<String> = row.into_iter().map(csv_number).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numeric(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}
