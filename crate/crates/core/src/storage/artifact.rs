//! Trained model artifacts and their JSON persistence.
//!
//! A model file is one JSON document holding the fully-defaulted options,
//! the fitted preprocessor, the learned parameters, the training log and the
//! retained evaluation rows. Floats are written with shortest round-trip
//! formatting and read back exactly, so a reloaded model predicts
//! bit-identically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table::Table;
use crate::error::{Error, Result};
use crate::preprocess::PreprocessorState;
use crate::sql::ModelType;
use crate::train::{LogEntry, ModelParams, TrainOptions};

pub const SCHEMA_VERSION: u32 = 1;
pub const MODEL_FILE_EXTENSION: &str = ".mbqml.json";

/// Where the rows behind `eval_rows` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalSource {
    StoredEvalSplit,
    UserTable,
    TrainingData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub schema_version: u32,
    pub name: String,
    pub model_type: ModelType,
    pub options: TrainOptions,
    pub preprocessor: PreprocessorState,
    pub params: ModelParams,
    pub training_log: Vec<LogEntry>,
    /// Held-out rows, or the training rows under `NO_SPLIT`.
    pub eval_rows: Table,
    pub eval_source: EvalSource,
    pub seed_used: u64,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ModelArtifact {
    pub fn label_col(&self) -> &str {
        &self.preprocessor.label_col
    }

    /// Probability of class 1 for every row of `rows`.
    pub fn predict_proba(&self, rows: &Table) -> Result<Vec<f64>> {
        let x = self.preprocessor.transform_features(rows)?;
        Ok(self.params.predict_proba(&x))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Version {
            schema_version: Option<u32>,
        }
        let version: Version =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("corrupted model file: {e}")))?;
        match version.schema_version {
            Some(SCHEMA_VERSION) => {}
            Some(v) => {
                return Err(Error::Format(format!(
                    "unsupported schema_version {v} (expected {SCHEMA_VERSION})"
                )))
            }
            None => return Err(Error::Format("model file has no schema_version".into())),
        }
        let artifact: ModelArtifact = serde_json::from_str(text)
            .map_err(|e| Error::Format(format!("corrupted model file: {e}")))?;
        if let ModelParams::Dnn(p) = &artifact.params {
            if !p.is_consistent() {
                return Err(Error::Format("inconsistent network layer dimensions".into()));
            }
        }
        Ok(artifact)
    }
}

pub fn save_model(artifact: &ModelArtifact, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, artifact.to_json()?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelArtifact> {
    ModelArtifact::from_json(&fs::read_to_string(path)?)
}
