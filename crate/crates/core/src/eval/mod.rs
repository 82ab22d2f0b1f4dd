//! Evaluation metrics, curves, and the `ML.*` result tables.

pub mod curves;
pub mod metrics;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::binary_labels;
use crate::storage::{Column, ColumnData, EvalSource, ModelArtifact, Table};
use crate::train::ModelParams;

pub use curves::{pr_auc, pr_curve, roc_auc, roc_curve, threshold_sweep, trapezoid_auc, CurvePoint};
pub use metrics::{classification_metrics, confusion, log_loss, ConfusionCounts, Metrics};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Header of the exported curve CSV and columns of `ML.ROC_CURVE`.
pub const CURVE_COLUMNS: [&str; 4] = ["threshold", "recall", "false_positive_rate", "precision"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub threshold: f64,
    pub counts: ConfusionCounts,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: f64,
    pub f1_score: Option<f64>,
    pub log_loss: f64,
    /// `None` when the evaluated rows hold a single class.
    pub roc_auc: Option<f64>,
    pub pr_auc: Option<f64>,
    pub source: EvalSource,
}

pub fn evaluate(labels: &[bool], scores: &[f64], threshold: f64, source: EvalSource) -> Result<EvaluationReport> {
    let counts = confusion(labels, scores, threshold)?;
    let m = classification_metrics(&counts, labels, scores);
    let optional = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Degenerate(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(EvaluationReport {
        threshold,
        counts,
        precision: m.precision,
        recall: m.recall,
        accuracy: m.accuracy,
        f1_score: m.f1_score,
        log_loss: m.log_loss,
        roc_auc: optional(roc_auc(labels, scores))?,
        pr_auc: optional(pr_auc(labels, scores))?,
        source,
    })
}

impl EvaluationReport {
    /// One-row table; the metric columns come first.
    pub fn to_table(&self) -> Table {
        let f = |v: Option<f64>| ColumnData::Float64(vec![v]);
        let i = |v: u64| ColumnData::Int64(vec![Some(v as i64)]);
        let source = serde_json::to_value(self.source)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string));
        let columns = vec![
            Column::new("precision", f(self.precision)),
            Column::new("recall", f(self.recall)),
            Column::new("accuracy", f(Some(self.accuracy))),
            Column::new("f1_score", f(self.f1_score)),
            Column::new("log_loss", f(Some(self.log_loss))),
            Column::new("roc_auc", f(self.roc_auc)),
            Column::new("pr_auc", f(self.pr_auc)),
            Column::new("threshold", f(Some(self.threshold))),
            Column::new("tp", i(self.counts.tp)),
            Column::new("fp", i(self.counts.fp)),
            Column::new("tn", i(self.counts.tn)),
            Column::new("fn", i(self.counts.fn_)),
            Column::new("source", ColumnData::String(vec![source])),
        ];
        Table::new("evaluation", columns).expect("fixed schema")
    }
}

/// Labels and predicted probabilities for the rows of `rows` whose label is
/// non-NULL.
fn labelled_scores(model: &ModelArtifact, rows: &Table) -> Result<(Vec<bool>, Vec<f64>)> {
    let label_col = model.label_col();
    if rows.column(label_col).is_none() {
        return Err(Error::Schema(format!(
            "evaluation input has no label column '{label_col}'"
        )));
    }
    let labels = binary_labels(rows, label_col)?;
    let keep: Vec<usize> = (0..rows.row_count()).filter(|&r| labels[r].is_some()).collect();
    let rows = rows.take_rows(&keep);
    let scores = model.predict_proba(&rows)?;
    let labels = keep.iter().map(|&r| labels[r] == Some(1.0)).collect();
    Ok((labels, scores))
}

/// Rows the model evaluates on by default, and a warning when those are the
/// training rows.
fn default_rows(model: &ModelArtifact) -> (&Table, EvalSource, Option<String>) {
    let warning = (model.eval_source == EvalSource::TrainingData).then(|| {
        format!(
            "model '{}' was trained with NO_SPLIT; metrics are computed on its training data",
            model.name
        )
    });
    (&model.eval_rows, model.eval_source, warning)
}

/// `ML.EVALUATE`: the report at threshold 0.5 plus any warnings.
pub fn ml_evaluate(model: &ModelArtifact, input: Option<&Table>) -> Result<(EvaluationReport, Vec<String>)> {
    let (rows, source, warning) = match input {
        Some(t) => (t, EvalSource::UserTable, None),
        None => default_rows(model),
    };
    let (labels, scores) = labelled_scores(model, rows)?;
    if labels.is_empty() {
        return Err(Error::Empty("no labelled rows to evaluate".into()));
    }
    let report = evaluate(&labels, &scores, DEFAULT_THRESHOLD, source)?;
    Ok((report, warning.into_iter().collect()))
}

/// `ML.PREDICT`: the input columns plus `predicted_<label>` and
/// `predicted_<label>_prob`, in input row order.
pub fn ml_predict(model: &ModelArtifact, input: &Table, threshold: f64) -> Result<Table> {
    let probs = model.predict_proba(input)?;
    let label = model.label_col();
    let predicted = probs.iter().map(|&p| Some((p >= threshold) as i64)).collect();
    input.clone().with_columns(vec![
        Column::new(format!("predicted_{label}"), ColumnData::Int64(predicted)),
        Column::new(
            format!("predicted_{label}_prob"),
            ColumnData::Float64(probs.into_iter().map(Some).collect()),
        ),
    ])
}

/// Total split gain per source feature, highest first. One-hot columns are
/// credited to the feature they encode; ties keep schema order.
pub fn feature_importance(model: &ModelArtifact) -> Result<Vec<(String, f64)>> {
    let ModelParams::BoostedTree(ensemble) = &model.params else {
        return Err(Error::ModelType(format!(
            "feature importance needs a boosted_tree_classifier; '{}' is {}",
            model.name,
            model.model_type.as_str()
        )));
    };
    let features = &model.preprocessor.features;
    let mut gains = vec![0.0; features.len()];
    for tree in &ensemble.trees {
        tree.for_each_split(&mut |col, gain| {
            if let Some(i) = features.iter().position(|f| f.span().contains(&col)) {
                gains[i] += gain;
            }
        });
    }
    let mut out: Vec<(String, f64)> = features.iter().map(|f| f.name.clone()).zip(gains).collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(out)
}

pub fn ml_feature_importance(model: &ModelArtifact) -> Result<Table> {
    let rows = feature_importance(model)?;
    let (names, gains): (Vec<_>, Vec<_>) = rows.into_iter().map(|(n, g)| (Some(n), Some(g))).unzip();
    Table::new(
        "feature_importance",
        vec![
            Column::new("feature", ColumnData::String(names)),
            Column::new("importance_gain", ColumnData::Float64(gains)),
        ],
    )
}

/// The threshold sweep on the model's evaluation rows, from the highest
/// score down; the last point has recall 1.
pub fn roc_curve_points(model: &ModelArtifact) -> Result<Vec<CurvePoint>> {
    let (rows, _, _) = default_rows(model);
    let (labels, scores) = labelled_scores(model, rows)?;
    if labels.is_empty() {
        return Err(Error::Empty(format!("model '{}' has no evaluation rows", model.name)));
    }
    threshold_sweep(&labels, &scores)
}

pub fn curve_table(points: &[CurvePoint]) -> Table {
    let col = |f: fn(&CurvePoint) -> Option<f64>| ColumnData::Float64(points.iter().map(f).collect());
    Table::new(
        "roc_curve",
        vec![
            Column::new(CURVE_COLUMNS[0], col(|p| Some(p.threshold))),
            Column::new(CURVE_COLUMNS[1], col(|p| Some(p.recall))),
            Column::new(CURVE_COLUMNS[2], col(|p| Some(p.false_positive_rate))),
            Column::new(CURVE_COLUMNS[3], col(|p| p.precision)),
        ],
    )
    .expect("fixed schema")
}

pub fn ml_roc_curve(model: &ModelArtifact) -> Result<Table> {
    Ok(curve_table(&roc_curve_points(model)?))
}
