use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ColumnType {
    Int64,
    Float64,
    String,
}

impl fmt::Display for ColumnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColumnType::Int64 => "INT64",
            ColumnType::Float64 => "FLOAT64",
            ColumnType::String => "STRING",
        })
    }
}

/// A single cell value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Str(String),
    Null,
}

impl Value {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            _ => None,
        }
    }

    /// SQL ordering; `None` for NULLs and for string/number comparisons.
    pub fn sql_cmp(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => Some(a.cmp(b)),
            (Value::Str(a), Value::Str(b)) => Some(a.cmp(b)),
            (a, b) => a.as_f64()?.partial_cmp(&b.as_f64()?),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Str(s) => f.write_str(s),
            Value::Null => f.write_str("NULL"),
        }
    }
}

/// Typed, nullable column storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "values", rename_all = "UPPERCASE")]
pub enum ColumnData {
    Int64(Vec<Option<i64>>),
    Float64(Vec<Option<f64>>),
    String(Vec<Option<String>>),
}

impl ColumnData {
    pub fn empty(ty: ColumnType) -> Self {
        match ty {
            ColumnType::Int64 => ColumnData::Int64(Vec::new()),
            ColumnType::Float64 => ColumnData::Float64(Vec::new()),
            ColumnType::String => ColumnData::String(Vec::new()),
        }
    }

    pub fn column_type(&self) -> ColumnType {
        match self {
            ColumnData::Int64(_) => ColumnType::Int64,
            ColumnData::Float64(_) => ColumnType::Float64,
            ColumnData::String(_) => ColumnType::String,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ColumnData::Int64(v) => v.len(),
            ColumnData::Float64(v) => v.len(),
            ColumnData::String(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, row: usize) -> Value {
        match self {
            ColumnData::Int64(v) => v[row].map_or(Value::Null, Value::Int),
            ColumnData::Float64(v) => v[row].map_or(Value::Null, Value::Float),
            ColumnData::String(v) => v[row].clone().map_or(Value::Null, Value::Str),
        }
    }

    pub fn is_null(&self, row: usize) -> bool {
        match self {
            ColumnData::Int64(v) => v[row].is_none(),
            ColumnData::Float64(v) => v[row].is_none(),
            ColumnData::String(v) => v[row].is_none(),
        }
    }

    /// Numeric view of one cell; `None` for NULL and for strings.
    pub fn get_f64(&self, row: usize) -> Option<f64> {
        match self {
            ColumnData::Int64(v) => v[row].map(|i| i as f64),
            ColumnData::Float64(v) => v[row],
            ColumnData::String(_) => None,
        }
    }

    /// Appends a value, promoting INT to FLOAT where the column is FLOAT64.
    pub fn push(&mut self, value: Value) -> Result<()> {
        match (self, value) {
            (ColumnData::Int64(v), Value::Int(i)) => v.push(Some(i)),
            (ColumnData::Float64(v), Value::Float(f)) => v.push(Some(f)),
            (ColumnData::Float64(v), Value::Int(i)) => v.push(Some(i as f64)),
            (ColumnData::String(v), Value::Str(s)) => v.push(Some(s)),
            (ColumnData::Int64(v), Value::Null) => v.push(None),
            (ColumnData::Float64(v), Value::Null) => v.push(None),
            (ColumnData::String(v), Value::Null) => v.push(None),
            (col, value) => {
                return Err(Error::Type(format!(
                    "cannot store {value:?} in a {} column",
                    col.column_type()
                )))
            }
        }
        Ok(())
    }

    pub fn take(&self, rows: &[usize]) -> ColumnData {
        match self {
            ColumnData::Int64(v) => ColumnData::Int64(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Float64(v) => ColumnData::Float64(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::String(v) => {
                ColumnData::String(rows.iter().map(|&r| v[r].clone()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    #[serde(flatten)]
    pub data: ColumnData,
}

impl Column {
    pub fn new(name: impl Into<String>, data: ColumnData) -> Self {
        Column {
            name: name.into(),
            data,
        }
    }

    pub fn column_type(&self) -> ColumnType {
        self.data.column_type()
    }
}

/// Named in-memory columnar relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    columns: Vec<Column>,
    row_count: usize,
}

impl Table {
    /// Builds a table, checking column names are unique (ignoring case) and
    /// all columns have the same length. `row_count` is only consulted when
    /// there are no columns.
    pub fn new(name: impl Into<String>, columns: Vec<Column>) -> Result<Self> {
        let row_count = columns.first().map_or(0, |c| c.data.len());
        Self::with_row_count(name, columns, row_count)
    }

    pub fn with_row_count(
        name: impl Into<String>,
        columns: Vec<Column>,
        row_count: usize,
    ) -> Result<Self> {
        for (i, c) in columns.iter().enumerate() {
            if columns[..i]
                .iter()
                .any(|o| o.name.eq_ignore_ascii_case(&c.name))
            {
                return Err(Error::Name(format!("duplicate column name '{}'", c.name)));
            }
            if c.data.len() != row_count {
                return Err(Error::Schema(format!(
                    "column '{}' has {} cells, expected {row_count}",
                    c.name,
                    c.data.len()
                )));
            }
        }
        Ok(Table {
            name: name.into(),
            columns,
            row_count,
        })
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<Column> {
        self.columns
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn schema(&self) -> Vec<(String, ColumnType)> {
        self.columns
            .iter()
            .map(|c| (c.name.clone(), c.column_type()))
            .collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns
            .iter()
            .position(|c| c.name.eq_ignore_ascii_case(name))
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.column_index(name).map(|i| &self.columns[i])
    }

    pub fn value(&self, row: usize, col: usize) -> Value {
        self.columns[col].data.get(row)
    }

    pub fn row(&self, row: usize) -> Vec<Value> {
        self.columns.iter().map(|c| c.data.get(row)).collect()
    }

    /// New table holding the given rows, in the given order.
    pub fn take_rows(&self, rows: &[usize]) -> Table {
        Table {
            name: self.name.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| Column::new(c.name.clone(), c.data.take(rows)))
                .collect(),
            row_count: rows.len(),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Table {
        self.name = name.into();
        self
    }

    /// Appends columns (e.g. prediction outputs) to the right.
    pub fn with_columns(mut self, extra: Vec<Column>) -> Result<Table> {
        self.columns.extend(extra);
        Table::with_row_count(self.name, self.columns, self.row_count)
    }
}

impl<'de> Deserialize<'de> for Table {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            name: String,
            columns: Vec<Column>,
            row_count: usize,
        }
        let raw = Raw::deserialize(d)?;
        Table::with_row_count(raw.name, raw.columns, raw.row_count)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected_case_insensitively() {
        let cols = vec![
            Column::new("a", ColumnData::Int64(vec![Some(1)])),
            Column::new("A", ColumnData::Int64(vec![Some(2)])),
        ];
        assert!(matches!(Table::new("t", cols), Err(Error::Name(_))));
    }

    #[test]
    fn ragged_columns_rejected() {
        let cols = vec![
            Column::new("a", ColumnData::Int64(vec![Some(1)])),
            Column::new("b", ColumnData::Int64(vec![])),
        ];
        assert!(matches!(Table::new("t", cols), Err(Error::Schema(_))));
    }

    #[test]
    fn push_promotes_int_into_float() {
        let mut c = ColumnData::empty(ColumnType::Float64);
        c.push(Value::Int(2)).unwrap();
        c.push(Value::Null).unwrap();
        assert_eq!(c, ColumnData::Float64(vec![Some(2.0), None]));
        assert!(c.push(Value::Str("x".into())).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let t = Table::new(
            "t",
            vec![
                Column::new("a", ColumnData::Int64(vec![Some(1), None])),
                Column::new("b", ColumnData::Float64(vec![Some(0.1), Some(2.5)])),
                Column::new("c", ColumnData::String(vec![None, Some("x".into())])),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&t).unwrap();
        let back: Table = serde_json::from_str(&json).unwrap();
        assert_eq!(t, back);
    }
}
