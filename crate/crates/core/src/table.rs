//! Minimal CSV table model used for every file the pipeline emits.
//!
//! Output is UTF-8 with `\n` record terminators, a header row and minimal
//! quoting. Leading comment lines start with `#`.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Comment lines written before the header, without the leading `#`.
    pub comments: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
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

    /// Fails unless the header equals `expected` exactly.
    pub fn expect_columns(&self, expected: &[&str], path: &str) -> Result<()> {
        if self.columns.iter().map(String::as_str).ne(expected.iter().copied()) {
            return Err(Error::Schema {
                path: path.to_string(),
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.columns.clone(),
            });
        }
        Ok(())
    }
}

pub fn write_csv(table: &Table) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for comment in &table.comments {
        out.push(b'#');
        out.extend_from_slice(comment.as_bytes());
        out.push(b'\n');
    }
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(out);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row)?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::Csv(csv::Error::from(e.into_error())))
}

pub fn read_csv(bytes: &[u8]) -> Result<Table> {
    let mut comments = Vec::new();
    let mut rest = bytes;
    while rest.first() == Some(&b'#') {
        let end = rest.iter().position(|&b| b == b'\n').unwrap_or(rest.len());
        comments.push(String::from_utf8_lossy(&rest[1..end]).into_owned());
        rest = &rest[(end + 1).min(rest.len())..];
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(rest);
    let columns = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        rows.push(record?.iter().map(str::to_string).collect());
    }
    Ok(Table {
        columns,
        rows,
        comments,
    })
}

pub fn write_table(path: &Path, table: &Table) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let bytes = write_csv(table)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_table(path: &Path) -> Result<Table> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    read_csv(&bytes)
}

/// Empty string for `None`.
pub(crate) fn opt(value: &Option<String>) -> String {
    value.clone().unwrap_or_default()
}

pub(crate) fn non_empty(field: &str) -> Option<String> {
    (!field.is_empty()).then(|| field.to_string())
}

pub(crate) fn parse_num<T: std::str::FromStr>(field: &str, column: &str, path: &str, row: usize) -> Result<T> {
    field.parse().map_err(|_| Error::Field {
        path: path.to_string(),
        row,
        message: format!("column `{column}`: cannot parse `{field}`"),
    })
}
