//! Data splitting and the three binary classifiers.
//!
//! All trainers consume a dense design matrix and 0/1 labels, minimize the
//! mean logistic loss (plus their regularizers), record the training loss per
//! iteration, and are bit-deterministic for fixed data and options.

pub mod dnn;
pub mod linear;
pub mod options;
pub mod split;
pub mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub use dnn::{train_dnn, DnnParams};
pub use linear::{train_logistic, LinearParams};
pub use options::TrainOptions;
pub use split::{split_random, SplitResult};
pub use tree::{train_boosted_tree, TreeEnsembleParams, TreeNode};

/// Margins are clipped to this magnitude before the sigmoid at predict time,
/// so probabilities stay strictly inside (0, 1).
pub const MARGIN_CLIP: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub iteration: usize,
    pub train_loss: f64,
}

/// Trained parameters plus the loss log. Iteration 0 is the loss at the
/// initial parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutput<P> {
    pub params: P,
    pub log: Vec<LogEntry>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    Linear(LinearParams),
    BoostedTree(TreeEnsembleParams),
    Dnn(DnnParams),
}

impl ModelParams {
    pub fn margin(&self, row: &[f64]) -> f64 {
        match self {
            ModelParams::Linear(p) => p.margin(row),
            ModelParams::BoostedTree(p) => p.margin(row),
            ModelParams::Dnn(p) => p.margin(row),
        }
    }

    pub fn predict_proba(&self, x: &Matrix) -> Vec<f64> {
        match self {
            ModelParams::Dnn(p) => p.margins(x).into_iter().map(clipped_sigmoid).collect(),
            _ => (0..x.rows())
                .map(|r| clipped_sigmoid(self.margin(x.row(r))))
                .collect(),
        }
    }
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn clipped_sigmoid(z: f64) -> f64 {
    sigmoid(z.clamp(-MARGIN_CLIP, MARGIN_CLIP))
}

/// Logistic loss of margin `z` against label `y`: `ln(1 + e^z) - y z`.
#[inline]
pub fn logistic_loss(z: f64, y: f64) -> f64 {
    let softplus = if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    };
    softplus - y * z
}

pub(crate) fn check_training_data(x: &Matrix, y: &[f64]) -> Result<()> {
    if x.rows() == 0 {
        return Err(Error::Data("no training rows".into()));
    }
    if x.rows() != y.len() {
        return Err(Error::Length(format!(
            "{} design rows but {} labels",
            x.rows(),
            y.len()
        )));
    }
    let pos = y.iter().filter(|&&v| v == 1.0).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::Data("labels must contain both classes".into()));
    }
    if pos + y.iter().filter(|&&v| v == 0.0).count() != y.len() {
        return Err(Error::Data("labels must be 0 or 1".into()));
    }
    Ok(())
}

/// Early-stopping rule shared by all trainers. Returns true when training
/// should stop after recording `cur`.
pub(crate) fn should_stop(prev: f64, cur: f64, min_rel_progress: f64) -> bool {
    if prev <= 0.0 {
        return true;
    }
    (prev - cur) / prev < min_rel_progress
}

pub(crate) fn convergence_warning(
    model: &str,
    iterations: usize,
    prev: f64,
    cur: f64,
    min_rel_progress: f64,
) -> Option<String> {
    if prev > 0.0 && (prev - cur) / prev >= min_rel_progress {
        Some(format!(
            "{model}: reached max_iterations ({iterations}) with relative progress {:.3e} \
             still above min_rel_progress {min_rel_progress:e}",
            (prev - cur) / prev
        ))
    } else {
        None
    }
}
