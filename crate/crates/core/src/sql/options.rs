//! Typed `OPTIONS(...)` clause of `CREATE MODEL`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelType {
    #[serde(rename = "logistic_reg")]
    LogisticReg,
    BoostedTreeClassifier,
    DnnClassifier,
}

impl ModelType {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelType::LogisticReg => "logistic_reg",
            ModelType::BoostedTreeClassifier => "boosted_tree_classifier",
            ModelType::DnnClassifier => "dnn_classifier",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "logistic_reg" => Some(ModelType::LogisticReg),
            "boosted_tree_classifier" => Some(ModelType::BoostedTreeClassifier),
            "dnn_classifier" => Some(ModelType::DnnClassifier),
            _ => None,
        }
    }

    /// Numeric features are standardized for every trainer except trees.
    pub fn standardizes(self) -> bool {
        !matches!(self, ModelType::BoostedTreeClassifier)
    }
}

impl fmt::Display for ModelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SplitMethod {
    Random,
    NoSplit,
}

impl SplitMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitMethod::Random => "RANDOM",
            SplitMethod::NoSplit => "NO_SPLIT",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RANDOM" => Some(SplitMethod::Random),
            "NO_SPLIT" => Some(SplitMethod::NoSplit),
            _ => None,
        }
    }
}

/// One validated `key = value` entry.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelOption {
    ModelType(ModelType),
    InputLabelCols(Vec<String>),
    DataSplitMethod(SplitMethod),
    DataSplitEvalFraction(f64),
    MaxIterations(u64),
    LearnRate(f64),
    MinRelProgress(f64),
    L1Reg(f64),
    L2Reg(f64),
    MaxTreeDepth(u64),
    HiddenUnits(Vec<u64>),
    BatchSize(u64),
    Seed(u64),
}

pub const OPTION_KEYS: &[&str] = &[
    "model_type",
    "input_label_cols",
    "data_split_method",
    "data_split_eval_fraction",
    "max_iterations",
    "learn_rate",
    "min_rel_progress",
    "l1_reg",
    "l2_reg",
    "max_tree_depth",
    "hidden_units",
    "batch_size",
    "seed",
];

impl ModelOption {
    pub fn key(&self) -> &'static str {
        match self {
            ModelOption::ModelType(_) => "model_type",
            ModelOption::InputLabelCols(_) => "input_label_cols",
            ModelOption::DataSplitMethod(_) => "data_split_method",
            ModelOption::DataSplitEvalFraction(_) => "data_split_eval_fraction",
            ModelOption::MaxIterations(_) => "max_iterations",
            ModelOption::LearnRate(_) => "learn_rate",
            ModelOption::MinRelProgress(_) => "min_rel_progress",
            ModelOption::L1Reg(_) => "l1_reg",
            ModelOption::L2Reg(_) => "l2_reg",
            ModelOption::MaxTreeDepth(_) => "max_tree_depth",
            ModelOption::HiddenUnits(_) => "hidden_units",
            ModelOption::BatchSize(_) => "batch_size",
            ModelOption::Seed(_) => "seed",
        }
    }
}

/// Raw option value as written in SQL, before domain validation.
#[derive(Debug, Clone, PartialEq)]
pub enum OptionLiteral {
    Number(f64),
    String(String),
    List(Vec<OptionLiteral>),
}

impl ModelOption {
    /// Validates a raw literal against the domain of `key`.
    /// `key` must already be lower-cased.
    pub fn from_literal(key: &str, value: &OptionLiteral) -> Result<Self, String> {
        use OptionLiteral as L;
        let real = |pred: fn(f64) -> bool, domain: &str| match value {
            L::Number(v) if pred(*v) => Ok(*v),
            _ => Err(format!("{key} must be {domain}")),
        };
        let int = |min: u64| match value {
            L::Number(v) if v.fract() == 0.0 && *v >= min as f64 && *v <= u32::MAX as f64 => {
                Ok(*v as u64)
            }
            _ if min == 0 => Err(format!("{key} must be a nonnegative integer")),
            _ => Err(format!("{key} must be a positive integer")),
        };
        let string = || match value {
            L::String(s) => Ok(s.clone()),
            _ => Err(format!("{key} must be a string")),
        };

        Ok(match key {
            "model_type" => {
                let s = string()?;
                ModelOption::ModelType(ModelType::parse(&s).ok_or_else(|| {
                    format!(
                        "model_type '{s}' is not one of 'logistic_reg', \
                         'boosted_tree_classifier', 'dnn_classifier'"
                    )
                })?)
            }
            "input_label_cols" => match value {
                L::List(items) if items.len() == 1 => match &items[0] {
                    L::String(s) => ModelOption::InputLabelCols(vec![s.clone()]),
                    _ => return Err("input_label_cols must hold a column name string".into()),
                },
                L::List(_) => {
                    return Err(
                        "input_label_cols must hold exactly one column (binary classification)"
                            .into(),
                    )
                }
                _ => return Err("input_label_cols must be a list like ['label']".into()),
            },
            "data_split_method" => {
                let s = string()?;
                ModelOption::DataSplitMethod(SplitMethod::parse(&s).ok_or_else(|| {
                    format!("data_split_method '{s}' is not one of 'RANDOM', 'NO_SPLIT'")
                })?)
            }
            "data_split_eval_fraction" => ModelOption::DataSplitEvalFraction(real(
                |v| v > 0.0 && v < 1.0,
                "a real in (0, 1)",
            )?),
            "max_iterations" => ModelOption::MaxIterations(int(1)?),
            "learn_rate" => ModelOption::LearnRate(real(|v| v > 0.0, "a positive real")?),
            "min_rel_progress" => {
                ModelOption::MinRelProgress(real(|v| v > 0.0, "a positive real")?)
            }
            "l1_reg" => ModelOption::L1Reg(real(|v| v >= 0.0, "a nonnegative real")?),
            "l2_reg" => ModelOption::L2Reg(real(|v| v >= 0.0, "a nonnegative real")?),
            "max_tree_depth" => match int(1)? {
                // deeper trees would exceed the model file's nesting limit
                d if d <= MAX_TREE_DEPTH => ModelOption::MaxTreeDepth(d),
                _ => return Err(format!("max_tree_depth must be at most {MAX_TREE_DEPTH}")),
            },
            "hidden_units" => match value {
                L::List(items) => {
                    let mut units = Vec::with_capacity(items.len());
                    for item in items {
                        match item {
                            L::Number(v) if v.fract() == 0.0 && *v >= 1.0 && *v <= 1e6 => {
                                units.push(*v as u64)
                            }
                            _ => return Err("hidden_units must be a list of positive integers".into()),
                        }
                    }
                    ModelOption::HiddenUnits(units)
                }
                _ => return Err("hidden_units must be a list of positive integers".into()),
            },
            "batch_size" => ModelOption::BatchSize(int(1)?),
            "seed" => ModelOption::Seed(int(0)?),
            other => return Err(format!("unknown option '{other}'")),
        })
    }

    pub fn to_literal(&self) -> OptionLiteral {
        use OptionLiteral as L;
        match self {
            ModelOption::ModelType(t) => L::String(t.as_str().into()),
            ModelOption::InputLabelCols(cols) => {
                L::List(cols.iter().cloned().map(L::String).collect())
            }
            ModelOption::DataSplitMethod(m) => L::String(m.as_str().into()),
            ModelOption::DataSplitEvalFraction(v)
            | ModelOption::LearnRate(v)
            | ModelOption::MinRelProgress(v)
            | ModelOption::L1Reg(v)
            | ModelOption::L2Reg(v) => L::Number(*v),
            ModelOption::MaxIterations(v)
            | ModelOption::MaxTreeDepth(v)
            | ModelOption::BatchSize(v)
            | ModelOption::Seed(v) => L::Number(*v as f64),
            ModelOption::HiddenUnits(units) => {
                L::List(units.iter().map(|u| L::Number(*u as f64)).collect())
            }
        }
    }
}

/// Options in source order. Keys are unique.
pub const MAX_TREE_DEPTH: u64 = 64;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OptionsMap {
    entries: Vec<ModelOption>,
}

macro_rules! getter {
    ($name:ident, $variant:ident, $ty:ty) => {
        pub fn $name(&self) -> Option<$ty> {
            self.entries.iter().find_map(|o| match o {
                ModelOption::$variant(v) => Some(v.clone()),
                _ => None,
            })
        }
    };
}

impl OptionsMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false (and leaves the map unchanged) if the key is already set.
    pub fn insert(&mut self, option: ModelOption) -> bool {
        if self.entries.iter().any(|o| o.key() == option.key()) {
            return false;
        }
        self.entries.push(option);
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = &ModelOption> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    getter!(model_type, ModelType, ModelType);
    getter!(input_label_cols, InputLabelCols, Vec<String>);
    getter!(data_split_method, DataSplitMethod, SplitMethod);
    getter!(data_split_eval_fraction, DataSplitEvalFraction, f64);
    getter!(max_iterations, MaxIterations, u64);
    getter!(learn_rate, LearnRate, f64);
    getter!(min_rel_progress, MinRelProgress, f64);
    getter!(l1_reg, L1Reg, f64);
    getter!(l2_reg, L2Reg, f64);
    getter!(max_tree_depth, MaxTreeDepth, u64);
    getter!(hidden_units, HiddenUnits, Vec<u64>);
    getter!(batch_size, BatchSize, u64);
    getter!(seed, Seed, u64);
}

impl FromIterator<ModelOption> for OptionsMap {
    fn from_iter<I: IntoIterator<Item = ModelOption>>(iter: I) -> Self {
        let mut map = OptionsMap::new();
        for o in iter {
            map.insert(o);
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains_enforced() {
        let n = OptionLiteral::Number;
        assert!(ModelOption::from_literal("data_split_eval_fraction", &n(1.5)).is_err());
        assert!(ModelOption::from_literal("data_split_eval_fraction", &n(0.0)).is_err());
        assert!(ModelOption::from_literal("max_iterations", &n(2.5)).is_err());
        assert!(ModelOption::from_literal("max_iterations", &n(0.0)).is_err());
        assert!(ModelOption::from_literal("seed", &n(0.0)).is_ok());
        assert!(ModelOption::from_literal("l1_reg", &n(-0.1)).is_err());
        assert_eq!(
            ModelOption::from_literal("learn_rate", &n(0.05)),
            Ok(ModelOption::LearnRate(0.05))
        );
    }

    #[test]
    fn label_cols_must_be_single() {
        let two = OptionLiteral::List(vec![
            OptionLiteral::String("a".into()),
            OptionLiteral::String("b".into()),
        ]);
        assert!(ModelOption::from_literal("input_label_cols", &two).is_err());
    }

    #[test]
    fn duplicate_insert_rejected() {
        let mut m = OptionsMap::new();
        assert!(m.insert(ModelOption::Seed(1)));
        assert!(!m.insert(ModelOption::Seed(2)));
        assert_eq!(m.seed(), Some(1));
    }
}
