use serde::{Deserialize, Serialize};

use crate::sql::{ModelType, OptionsMap, SplitMethod};

/// Label column used when `input_label_cols` is not given.
pub const DEFAULT_LABEL_COL: &str = "label";

/// Fully-defaulted training options, as recorded in every model artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainOptions {
    pub model_type: ModelType,
    pub label_col: String,
    pub max_iterations: u64,
    pub learn_rate: f64,
    pub min_rel_progress: f64,
    pub l1_reg: f64,
    pub l2_reg: f64,
    pub data_split_method: SplitMethod,
    pub data_split_eval_fraction: f64,
    pub max_tree_depth: u64,
    pub hidden_units: Vec<u64>,
    pub batch_size: u64,
    pub seed: u64,
}

impl TrainOptions {
    pub fn defaults(model_type: ModelType) -> Self {
        TrainOptions {
            model_type,
            label_col: DEFAULT_LABEL_COL.to_string(),
            max_iterations: 50,
            learn_rate: match model_type {
                ModelType::BoostedTreeClassifier => 0.3,
                _ => 0.1,
            },
            min_rel_progress: 0.01,
            l1_reg: 0.0,
            l2_reg: 1.0,
            data_split_method: SplitMethod::Random,
            data_split_eval_fraction: 0.2,
            max_tree_depth: 6,
            hidden_units: vec![64, 32],
            batch_size: 256,
            seed: 42,
        }
    }

    /// Applies explicit options over the defaults. `default_seed` is used
    /// when the statement has no `seed` option.
    pub fn resolve(model_type: ModelType, options: &OptionsMap, default_seed: u64) -> Self {
        let d = TrainOptions::defaults(model_type);
        TrainOptions {
            model_type,
            label_col: options
                .input_label_cols()
                .and_then(|c| c.into_iter().next())
                .unwrap_or(d.label_col),
            max_iterations: options.max_iterations().unwrap_or(d.max_iterations),
            learn_rate: options.learn_rate().unwrap_or(d.learn_rate),
            min_rel_progress: options.min_rel_progress().unwrap_or(d.min_rel_progress),
            l1_reg: options.l1_reg().unwrap_or(d.l1_reg),
            l2_reg: options.l2_reg().unwrap_or(d.l2_reg),
            data_split_method: options.data_split_method().unwrap_or(d.data_split_method),
            data_split_eval_fraction: options
                .data_split_eval_fraction()
                .unwrap_or(d.data_split_eval_fraction),
            max_tree_depth: options.max_tree_depth().unwrap_or(d.max_tree_depth),
            hidden_units: options.hidden_units().unwrap_or(d.hidden_units),
            batch_size: options.batch_size().unwrap_or(d.batch_size),
            seed: options.seed().unwrap_or(default_seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sql::ModelOption;

    #[test]
    fn learn_rate_default_depends_on_model() {
        assert_eq!(TrainOptions::defaults(ModelType::BoostedTreeClassifier).learn_rate, 0.3);
        assert_eq!(TrainOptions::defaults(ModelType::LogisticReg).learn_rate, 0.1);
        assert_eq!(TrainOptions::defaults(ModelType::DnnClassifier).learn_rate, 0.1);
    }

    #[test]
    fn explicit_options_override() {
        let map: OptionsMap = [
            ModelOption::ModelType(ModelType::LogisticReg),
            ModelOption::InputLabelCols(vec!["y".into()]),
            ModelOption::L2Reg(2.0),
        ]
        .into_iter()
        .collect();
        let o = TrainOptions::resolve(ModelType::LogisticReg, &map, 7);
        assert_eq!(o.label_col, "y");
        assert_eq!(o.l2_reg, 2.0);
        assert_eq!(o.seed, 7);
        assert_eq!(o.max_iterations, 50);
        assert_eq!(o.hidden_units, vec![64, 32]);
    }
}
