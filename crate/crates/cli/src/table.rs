//! CSV result tables with `#`-prefixed provenance comments. Values are
//! written with 17 significant digits so a parse-back reproduces every f64
//! bit for bit.

use std::path::Path;

use crate::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Comment lines written before the header (without the `# ` prefix).
    pub provenance: Vec<String>,
    /// Comment lines written after the data (without the `# ` prefix).
    pub footer: Vec<String>,
}

impl ResultTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>) -> CliResult<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(CliError::Numeric(format!(
                    "row {i} has {} fields but the table has {} columns",
                    row.len(),
                    columns.len()
                )));
            }
        }
        Ok(Self {
            columns,
            rows,
            provenance: Vec::new(),
            footer: Vec::new(),
        })
    }
}

/// 17 significant digits: lossless for f64.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render_table(table: &ResultTable) -> String {
    let mut out = String::new();
    for line in &table.provenance {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    for line in &table.footer {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

pub fn write_table(table: &ResultTable, path: &Path) -> CliResult<()> {
    std::fs::write(path, render_table(table))
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Parse a table written by [`write_table`]; used for round-trip checks.
pub fn parse_table(text: &str) -> CliResult<ResultTable> {
    let mut provenance = Vec::new();
    let mut footer = Vec::new();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(comment) = line.strip_prefix("# ") {
            if columns.is_none() {
                provenance.push(comment.to_string());
            } else {
                footer.push(comment.to_string());
            }
            continue;
        }
        if columns.is_none() {
            columns = Some(line.split(',').map(str::to_string).collect());
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        rows.push(row.map_err(|e| CliError::Io(format!("bad numeric field: {e}")))?);
    }
    let columns = columns.ok_or_else(|| CliError::Io("table has no header row".into()))?;
    let mut table = ResultTable::new(columns, rows)?;
    table.provenance = provenance;
    table.footer = footer;
    Ok(table)
}
