//! CSV cohort files.
//!
//! UTF-8, comma separated, one header row naming the analyte columns plus an
//! optional `volume` column. Columns are bound by header name, never by
//! position. LF or CRLF line endings are accepted; output uses LF.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Terminator, Trim, WriterBuilder};
use dbsvol_core::{AnalytePanel, Cohort, Sample};

use crate::error::{CliError, Result};

pub const VOLUME_COLUMN: &str = "volume";
pub const PREDICTION_COLUMN: &str = "predicted_volume";

/// Raw CSV contents with 1-based source line numbers for each data row.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub lines: Vec<u64>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }
}

pub fn read_table(path: &Path) -> Result<CsvTable> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| CliError::io(path, e))?;
    parse_table(&bytes, path)
}

pub(crate) fn parse_table(bytes: &[u8], path: &Path) -> Result<CsvTable> {
    let parse_err = |line: u64, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(bytes);

    let mut records = reader.records();
    let headers: Vec<String> = match records.next() {
        None => return Err(parse_err(1, "missing header row".into())),
        Some(r) => r
            .map_err(|e| csv_error(e, path))?
            .iter()
            .map(str::to_owned)
            .collect(),
    };
    for (i, h) in headers.iter().enumerate() {
        if h.is_empty() {
            return Err(parse_err(
                1,
                format!("empty column name in position {}", i + 1),
            ));
        }
        if headers[..i].contains(h) {
            return Err(parse_err(1, format!("duplicate column {h:?}")));
        }
    }

    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for record in records {
        let record: StringRecord = record.map_err(|e| csv_error(e, path))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != headers.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", headers.len(), record.len()),
            ));
        }
        rows.push(record.iter().map(str::to_owned).collect());
        lines.push(line);
    }
    Ok(CsvTable {
        headers,
        rows,
        lines,
    })
}

fn csv_error(e: csv::Error, path: &Path) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    }
}

fn parse_number(field: &str, column: &str, line: u64, path: &Path) -> Result<f64> {
    let err = |message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let value: f64 = field
        .parse()
        .map_err(|_| err(format!("column {column:?}: {field:?} is not a number")))?;
    if !value.is_finite() {
        return Err(err(format!("column {column:?}: {field:?} is not finite")));
    }
    Ok(value)
}

/// Builds a cohort from a table. With `analytes` the named columns are
/// bound (and only they are validated); otherwise every column except
/// `volume` is an analyte. `require_volume` makes the volume column
/// mandatory.
pub fn table_to_cohort(
    table: &CsvTable,
    analytes: Option<&[String]>,
    require_volume: bool,
    path: &Path,
) -> Result<Cohort> {
    let codes: Vec<String> = match analytes {
        Some(list) => list.to_vec(),
        None => table
            .headers
            .iter()
            .filter(|h| *h != VOLUME_COLUMN)
            .cloned()
            .collect(),
    };
    let columns = codes
        .iter()
        .map(|c| {
            table.column(c).ok_or_else(|| CliError::Format {
                path: path.to_path_buf(),
                message: format!("missing analyte column {c:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let volume_col = table.column(VOLUME_COLUMN);
    if require_volume && volume_col.is_none() {
        return Err(CliError::Format {
            path: path.to_path_buf(),
            message: format!("missing {VOLUME_COLUMN:?} column"),
        });
    }
    let panel = AnalytePanel::new(&codes).map_err(|e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;

    let mut samples = Vec::with_capacity(table.rows.len());
    let mut volumes = Vec::with_capacity(table.rows.len());
    for (row, &line) in table.rows.iter().zip(&table.lines) {
        let mut values = Vec::with_capacity(columns.len());
        for (&col, code) in columns.iter().zip(&codes) {
            let v = parse_number(&row[col], code, line, path)?;
            if v < 0.0 {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("column {code:?}: negative amount {v}"),
                });
            }
            values.push(v);
        }
        samples.push(Sample::new(values)?);
        if let Some(col) = volume_col {
            let v = parse_number(&row[col], VOLUME_COLUMN, line, path)?;
            if v <= 0.0 {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("volume must be > 0, found {v}"),
                });
            }
            volumes.push(v);
        }
    }
    Ok(Cohort::new(panel, samples, volume_col.map(|_| volumes))?)
}

pub fn read_cohort(
    path: &Path,
    analytes: Option<&[String]>,
    require_volume: bool,
) -> Result<Cohort> {
    table_to_cohort(&read_table(path)?, analytes, require_volume, path)
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_write_error(e: csv::Error) -> CliError {
    CliError::io("<output>", io::Error::other(e))
}

/// Writes analyte columns in panel order, then `volume` when present.
/// Numbers use the shortest representation that parses back exactly.
pub fn write_cohort<W: Write>(cohort: &Cohort, out: W) -> Result<()> {
    let mut w = writer(out);
    let mut header: Vec<&str> = cohort
        .panel()
        .analytes()
        .iter()
        .map(String::as_str)
        .collect();
    if cohort.volumes().is_some() {
        header.push(VOLUME_COLUMN);
    }
    w.write_record(&header).map_err(csv_write_error)?;
    for (i, s) in cohort.samples().iter().enumerate() {
        let mut fields: Vec<String> = s.values().iter().map(|v| v.to_string()).collect();
        if let Some(v) = cohort.volumes() {
            fields.push(v[i].to_string());
        }
        w.write_record(&fields).map_err(csv_write_error)?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}

/// Writes the input table with an appended prediction column.
pub fn write_predictions<W: Write>(table: &CsvTable, predictions: &[f64], out: W) -> Result<()> {
    let mut w = writer(out);
    let mut header = table.headers.clone();
    header.push(PREDICTION_COLUMN.to_owned());
    w.write_record(&header).map_err(csv_write_error)?;
    for (row, p) in table.rows.iter().zip(predictions) {
        let mut fields = row.clone();
        fields.push(p.to_string());
        w.write_record(&fields).map_err(csv_write_error)?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}
