//! Statement execution against an in-memory catalog.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::eval::{self, EvaluationReport};
use crate::exec::execute_select;
use crate::preprocess::{binary_labels, PreprocessorState};
use crate::sql::{parse_statement, CreateModelStmt, ModelType, SplitMethod, Statement};
use crate::storage::{
    load_model, save_model, Catalog, EvalSource, ModelArtifact, Table, MODEL_FILE_EXTENSION, SCHEMA_VERSION,
};
use crate::train::{
    split_random, train_boosted_tree, train_dnn, train_logistic, ModelParams, TrainOptions,
};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Table(Table),
    Report(EvaluationReport),
    Message(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: Output,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(output: Output) -> Self {
        Outcome {
            output,
            warnings: Vec::new(),
        }
    }
}

/// A session: the catalog, the seed used by models without a `seed` option,
/// and an optional directory where trained models are saved and looked up.
#[derive(Debug)]
pub struct Engine {
    pub catalog: Catalog,
    pub default_seed: u64,
    pub model_dir: Option<PathBuf>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            catalog: Catalog::new(),
            default_seed: DEFAULT_SEED,
            model_dir: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.default_seed = seed;
        self
    }

    pub fn with_model_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.model_dir = Some(dir.into());
        self
    }

    pub fn execute_sql(&mut self, sql: &str) -> Result<Outcome> {
        let stmt = parse_statement(sql)?;
        self.execute(&stmt)
    }

    pub fn execute(&mut self, stmt: &Statement) -> Result<Outcome> {
        match stmt {
            Statement::Select(s) => Ok(Outcome::new(Output::Table(execute_select(s, &self.catalog)?))),
            Statement::CreateTableFromCsv(s) => {
                let name = s.name.base();
                let rows = self.catalog.load_csv(&s.path, name, s.replace)?.row_count();
                Ok(Outcome::new(Output::Message(format!(
                    "loaded {rows} rows into table '{name}'"
                ))))
            }
            Statement::CreateModel(s) => self.create_model(s),
            Statement::MlEvaluate(s) => {
                let input = s
                    .input
                    .as_ref()
                    .map(|q| execute_select(q, &self.catalog))
                    .transpose()?;
                let model = self.model(s.model.base())?;
                let (report, warnings) = eval::ml_evaluate(model, input.as_ref())?;
                Ok(Outcome {
                    output: Output::Report(report),
                    warnings,
                })
            }
            Statement::MlPredict(s) => {
                let input = execute_select(&s.input, &self.catalog)?;
                let model = self.model(s.model.base())?;
                Ok(Outcome::new(Output::Table(eval::ml_predict(model, &input, s.threshold)?)))
            }
            Statement::MlFeatureImportance { model } => {
                let model = self.model(model.base())?;
                Ok(Outcome::new(Output::Table(eval::ml_feature_importance(model)?)))
            }
            Statement::MlRocCurve { model } => {
                let model = self.model(model.base())?;
                Ok(Outcome::new(Output::Table(eval::ml_roc_curve(model)?)))
            }
        }
    }

    fn model_path(&self, name: &str) -> Option<PathBuf> {
        self.model_dir
            .as_ref()
            .map(|d| d.join(format!("{name}{MODEL_FILE_EXTENSION}")))
    }

    /// Looks a model up in the catalog, then in the model directory.
    pub fn model(&mut self, name: &str) -> Result<&ModelArtifact> {
        if !self.catalog.has_model(name) {
            if let Some(path) = self.model_path(name).filter(|p| p.is_file()) {
                let artifact = load_model(&path)?;
                self.catalog.register_model(artifact, true)?;
            }
        }
        self.catalog.model(name)
    }

    pub fn save_model(&self, name: &str, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        save_model(self.catalog.model(name)?, path)
    }

    fn create_model(&mut self, stmt: &CreateModelStmt) -> Result<Outcome> {
        let name = stmt.name.base().to_string();
        if !stmt.replace && self.catalog.has_model(&name) {
            return Err(Error::Catalog(format!("model '{name}' already exists")));
        }
        let model_type = stmt
            .options
            .model_type()
            .ok_or_else(|| Error::ModelType("OPTIONS must set model_type".into()))?;
        let options = TrainOptions::resolve(model_type, &stmt.options, self.default_seed);
        let artifact = train_model(&name, execute_select(&stmt.query, &self.catalog)?, options)?;
        let warnings = artifact.warnings.clone();
        let message = format!(
            "trained model '{name}' ({}, {} features): {} iterations, final train loss {}",
            model_type.as_str(),
            artifact.preprocessor.features.len(),
            artifact.training_log.len() - 1,
            artifact.training_log.last().map_or(f64::NAN, |e| e.train_loss),
        );
        self.catalog.register_model(artifact, true)?;
        if let Some(path) = self.model_path(&name) {
            self.save_model(&name, path)?;
        }
        Ok(Outcome {
            output: Output::Message(message),
            warnings,
        })
    }
}

/// Splits `rows`, fits preprocessing on the training side, and trains.
/// Rows with a NULL label are dropped first.
pub fn train_model(name: &str, rows: Table, options: TrainOptions) -> Result<ModelArtifact> {
    let labels = binary_labels(&rows, &options.label_col)?;
    let labelled: Vec<usize> = (0..rows.row_count()).filter(|&r| labels[r].is_some()).collect();
    let rows = if labelled.len() == rows.row_count() {
        rows
    } else {
        rows.take_rows(&labelled)
    };
    if rows.row_count() == 0 {
        return Err(Error::Empty("training query returned no labelled rows".into()));
    }

    let mut warnings = Vec::new();
    let (train_rows, eval_rows, eval_source) = match options.data_split_method {
        SplitMethod::Random => {
            let split = split_random(&rows, options.data_split_eval_fraction, options.seed)?;
            (split.train_rows, split.eval_rows, EvalSource::StoredEvalSplit)
        }
        SplitMethod::NoSplit => {
            warnings.push(format!(
                "model '{name}' uses NO_SPLIT; evaluation will reuse the training data"
            ));
            (rows.clone(), rows, EvalSource::TrainingData)
        }
    };

    let preprocessor = PreprocessorState::fit(&train_rows, &options.label_col, options.model_type)?;
    let design = preprocessor.transform(&train_rows)?;
    let y = design.labels.expect("label column checked by fit");
    let (params, training_log, train_warnings) = match options.model_type {
        ModelType::LogisticReg => {
            let out = train_logistic(&design.x, &y, &options)?;
            (ModelParams::Linear(out.params), out.log, out.warnings)
        }
        ModelType::BoostedTreeClassifier => {
            let out = train_boosted_tree(&design.x, &y, &options)?;
            (ModelParams::BoostedTree(out.params), out.log, out.warnings)
        }
        ModelType::DnnClassifier => {
            let out = train_dnn(&design.x, &y, &options)?;
            (ModelParams::Dnn(out.params), out.log, out.warnings)
        }
    };
    warnings.extend(train_warnings);

    Ok(ModelArtifact {
        schema_version: SCHEMA_VERSION,
        name: name.to_string(),
        model_type: options.model_type,
        seed_used: options.seed,
        options,
        preprocessor,
        params,
        training_log,
        eval_rows,
        eval_source,
        warnings,
    })
}
