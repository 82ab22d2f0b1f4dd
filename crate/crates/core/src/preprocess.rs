//! Automatic feature pipeline: mean imputation, optional standardization and
//! one-hot encoding into a dense design matrix.
//!
//! Every non-label column is a feature. STRING columns are categorical, as
//! are numeric columns holding only whole numbers with at most
//! [`MAX_CATEGORICAL_DISTINCT`] distinct values (binary flags and ordinal
//! codes). Everything else is numeric.
//!
//! Categorical features get one output column per vocabulary entry plus a
//! trailing MISSING bucket that receives NULLs and values unseen at fit time.
//! Numeric features get one output column; NULLs are replaced by the training
//! mean and, when standardizing, values become `(x - mean) / stddev`. The
//! stddev is the population stddev of the imputed training column, recorded
//! as 1.0 for constant columns.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sql::ModelType;
use crate::storage::{ColumnData, ColumnType, Table, Value};

pub const MAX_CATEGORICAL_DISTINCT: usize = 13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureEncoding {
    Numeric {
        mean: f64,
        stddev: f64,
        impute_value: f64,
    },
    Categorical {
        vocabulary: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub source_type: ColumnType,
    /// First output column of this feature's span.
    pub offset: usize,
    pub encoding: FeatureEncoding,
}

impl FeatureSpec {
    pub fn width(&self) -> usize {
        match &self.encoding {
            FeatureEncoding::Numeric { .. } => 1,
            FeatureEncoding::Categorical { vocabulary } => vocabulary.len() + 1,
        }
    }

    pub fn span(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.width()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessorState {
    pub features: Vec<FeatureSpec>,
    pub standardize: bool,
    pub label_col: String,
}

/// Design matrix plus labels when the label column was present.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub x: Matrix,
    pub labels: Option<Vec<f64>>,
}

/// Canonical vocabulary key for a cell.
fn category_key(v: &Value) -> Option<String> {
    match v {
        Value::Int(i) => Some(i.to_string()),
        Value::Float(f) => Some(format!("{f:?}")),
        Value::Str(s) => Some(s.clone()),
        Value::Null => None,
    }
}

fn is_categorical(data: &ColumnData) -> bool {
    match data {
        ColumnData::String(_) => true,
        ColumnData::Int64(v) => {
            let distinct: BTreeSet<i64> = v.iter().flatten().copied().collect();
            distinct.len() <= MAX_CATEGORICAL_DISTINCT
        }
        ColumnData::Float64(v) => {
            let mut distinct = Vec::new();
            for x in v.iter().flatten() {
                if x.fract() != 0.0 {
                    return false;
                }
                if !distinct.contains(&x.to_bits()) {
                    distinct.push(x.to_bits());
                    if distinct.len() > MAX_CATEGORICAL_DISTINCT {
                        return false;
                    }
                }
            }
            true
        }
    }
}

fn vocabulary(data: &ColumnData) -> Vec<String> {
    match data {
        ColumnData::Int64(v) => {
            let set: BTreeSet<i64> = v.iter().flatten().copied().collect();
            set.into_iter().map(|i| i.to_string()).collect()
        }
        ColumnData::Float64(v) => {
            let mut vals: Vec<f64> = v.iter().flatten().copied().collect();
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            vals.into_iter().map(|f| format!("{f:?}")).collect()
        }
        ColumnData::String(v) => {
            let set: BTreeSet<&str> = v.iter().flatten().map(String::as_str).collect();
            set.into_iter().map(str::to_string).collect()
        }
    }
}

/// Checks the label column and returns the 0/1 labels (`None` for NULL).
pub fn binary_labels(table: &Table, label_col: &str) -> Result<Vec<Option<f64>>> {
    let col = table
        .column(label_col)
        .ok_or_else(|| Error::Label(format!("label column '{label_col}' not found")))?;
    if col.column_type() == ColumnType::String {
        return Err(Error::Label(format!(
            "label column '{label_col}' must be numeric"
        )));
    }
    (0..table.row_count())
        .map(|r| match col.data.get_f64(r) {
            None => Ok(None),
            Some(v) if v == 0.0 || v == 1.0 => Ok(Some(v)),
            Some(v) => Err(Error::Label(format!(
                "label column '{label_col}' holds {v}; only 0 and 1 are allowed"
            ))),
        })
        .collect()
}

impl PreprocessorState {
    pub fn fit(train: &Table, label_col: &str, model_type: ModelType) -> Result<Self> {
        let labels = binary_labels(train, label_col)?;
        if train.row_count() == 0 {
            return Err(Error::Empty("no training rows".into()));
        }
        let positives = labels.iter().flatten().filter(|&&y| y == 1.0).count();
        let negatives = labels.iter().flatten().filter(|&&y| y == 0.0).count();
        if positives == 0 || negatives == 0 {
            return Err(Error::Label(format!(
                "label column '{label_col}' must contain both classes"
            )));
        }

        let label_idx = train.column_index(label_col).expect("checked above");
        let mut features = Vec::new();
        let mut offset = 0;
        for (i, col) in train.columns().iter().enumerate() {
            if i == label_idx {
                continue;
            }
            let encoding = if is_categorical(&col.data) {
                FeatureEncoding::Categorical {
                    vocabulary: vocabulary(&col.data),
                }
            } else {
                numeric_stats(&col.data)
            };
            let spec = FeatureSpec {
                name: col.name.clone(),
                source_type: col.column_type(),
                offset,
                encoding,
            };
            offset += spec.width();
            features.push(spec);
        }

        Ok(PreprocessorState {
            features,
            standardize: model_type.standardizes(),
            label_col: label_col.to_string(),
        })
    }

    pub fn output_width(&self) -> usize {
        self.features.last().map_or(0, |f| f.offset + f.width())
    }

    /// Source feature owning output column `col`.
    pub fn feature_of_column(&self, col: usize) -> Option<&FeatureSpec> {
        self.features.iter().find(|f| f.span().contains(&col))
    }

    /// Features only; a label column, if present, is ignored.
    pub fn transform_features(&self, rows: &Table) -> Result<Matrix> {
        let width = self.output_width();
        let n = rows.row_count();
        let mut x = Matrix::zeros(n, width);
        for spec in &self.features {
            let col = rows.column(&spec.name).ok_or_else(|| {
                Error::Schema(format!("input is missing feature column '{}'", spec.name))
            })?;
            if col.column_type() != spec.source_type {
                return Err(Error::Schema(format!(
                    "feature column '{}' is {}, model was trained on {}",
                    spec.name,
                    col.column_type(),
                    spec.source_type
                )));
            }
            match &spec.encoding {
                FeatureEncoding::Numeric {
                    mean,
                    stddev,
                    impute_value,
                } => {
                    for r in 0..n {
                        let raw = col.data.get_f64(r).unwrap_or(*impute_value);
                        let v = if self.standardize {
                            (raw - mean) / stddev
                        } else {
                            raw
                        };
                        x.set(r, spec.offset, v);
                    }
                }
                FeatureEncoding::Categorical { vocabulary } => {
                    let index: HashMap<&str, usize> = vocabulary
                        .iter()
                        .enumerate()
                        .map(|(i, k)| (k.as_str(), i))
                        .collect();
                    let missing = vocabulary.len();
                    for r in 0..n {
                        let slot = category_key(&col.data.get(r))
                            .and_then(|k| index.get(k.as_str()).copied())
                            .unwrap_or(missing);
                        x.set(r, spec.offset + slot, 1.0);
                    }
                }
            }
        }
        Ok(x)
    }

    /// Features plus labels. Labels are returned when the label column is
    /// present; they must then be non-NULL 0/1 values.
    pub fn transform(&self, rows: &Table) -> Result<Design> {
        let x = self.transform_features(rows)?;
        let labels = match rows.column(&self.label_col) {
            None => None,
            Some(_) => Some(
                binary_labels(rows, &self.label_col)?
                    .into_iter()
                    .map(|y| {
                        y.ok_or_else(|| {
                            Error::Label(format!("NULL in label column '{}'", self.label_col))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?,
            ),
        };
        Ok(Design { x, labels })
    }
}

fn numeric_stats(data: &ColumnData) -> FeatureEncoding {
    let n = data.len();
    let observed: Vec<f64> = (0..n).filter_map(|r| data.get_f64(r)).collect();
    let mean = if observed.is_empty() {
        0.0
    } else {
        observed.iter().sum::<f64>() / observed.len() as f64
    };
    // NULLs sit exactly at the mean after imputation and contribute 0
    let ss: f64 = observed.iter().map(|x| (x - mean) * (x - mean)).sum();
    let sd = if n == 0 { 0.0 } else { (ss / n as f64).sqrt() };
    FeatureEncoding::Numeric {
        mean,
        stddev: if sd > 0.0 { sd } else { 1.0 },
        impute_value: mean,
    }
}
