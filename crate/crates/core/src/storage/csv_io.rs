//! CSV ingestion with schema inference, and CSV export.
//!
//! A column is INT64 if every non-empty field is a decimal integer, FLOAT64 if
//! every non-empty field is a finite decimal real, and STRING otherwise.
//! Empty fields are NULL. A column with no non-empty fields is STRING.

use std::io::{Read, Write};
use std::path::Path;

use super::table::{Column, ColumnData, ColumnType, Table};
use crate::error::{Error, Result};

fn parse_int(field: &str) -> Option<i64> {
    field.parse().ok()
}

fn parse_float(field: &str) -> Option<f64> {
    field.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Inferred type of one column's raw fields; `None` entries are empty fields.
pub fn infer_type<'a, I>(fields: I) -> ColumnType
where
    I: IntoIterator<Item = Option<&'a str>>,
{
    let mut all_int = true;
    let mut all_float = true;
    let mut any = false;
    for field in fields.into_iter().flatten() {
        any = true;
        if all_int && parse_int(field).is_none() {
            all_int = false;
        }
        if all_float && parse_float(field).is_none() {
            all_float = false;
            break;
        }
    }
    match (any, all_int, all_float) {
        (false, _, _) => ColumnType::String,
        (true, true, _) => ColumnType::Int64,
        (true, false, true) => ColumnType::Float64,
        _ => ColumnType::String,
    }
}

fn csv_error(err: csv::Error) -> Error {
    let row = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::Csv {
            row,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        other => Error::Csv {
            row,
            message: format!("{other:?}"),
        },
    }
}

pub fn read_csv(reader: impl Read, table_name: &str) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::Csv {
            row: 1,
            message: "missing header row".into(),
        });
    }

    let mut raw: Vec<Vec<Option<String>>> = vec![Vec::new(); headers.len()];
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        for (col, field) in raw.iter_mut().zip(record.iter()) {
            col.push(if field.is_empty() {
                None
            } else {
                Some(field.to_string())
            });
        }
    }

    let columns = headers
        .into_iter()
        .zip(raw)
        .map(|(name, fields)| {
            let data = match infer_type(fields.iter().map(Option::as_deref)) {
                ColumnType::Int64 => ColumnData::Int64(
                    fields
                        .iter()
                        .map(|f| f.as_deref().and_then(parse_int))
                        .collect(),
                ),
                ColumnType::Float64 => ColumnData::Float64(
                    fields
                        .iter()
                        .map(|f| f.as_deref().and_then(parse_float))
                        .collect(),
                ),
                ColumnType::String => ColumnData::String(fields),
            };
            Column::new(name, data)
        })
        .collect();
    Table::new(table_name, columns)
}

pub fn load_csv_file(path: impl AsRef<Path>, table_name: &str) -> Result<Table> {
    let file = std::fs::File::open(path.as_ref())?;
    read_csv(std::io::BufReader::new(file), table_name)
}

fn format_cell(data: &ColumnData, row: usize) -> String {
    match data {
        ColumnData::Int64(v) => v[row].map(|i| i.to_string()).unwrap_or_default(),
        // Debug keeps a decimal point or exponent, so FLOAT64 stays FLOAT64 on reload
        ColumnData::Float64(v) => v[row].map(|f| format!("{f:?}")).unwrap_or_default(),
        ColumnData::String(v) => v[row].clone().unwrap_or_default(),
    }
}

pub fn write_csv(table: &Table, writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(table.column_names()).map_err(csv_error)?;
    for row in 0..table.row_count() {
        w.write_record(table.columns().iter().map(|c| format_cell(&c.data, row)))
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}
