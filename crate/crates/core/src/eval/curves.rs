//! Threshold sweeps, ROC and precision-recall curves.
//!
//! Sweeps visit every distinct score from high to low, moving all tied rows
//! across the threshold at once.

use serde::{Deserialize, Serialize};

use super::metrics::check_lengths;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub threshold: f64,
    /// True-positive rate.
    pub recall: f64,
    pub false_positive_rate: f64,
    /// `None` where nothing is predicted positive.
    pub precision: Option<f64>,
}

fn class_totals(labels: &[bool]) -> (usize, usize) {
    let pos = labels.iter().filter(|&&y| y).count();
    (pos, labels.len() - pos)
}

/// One point per distinct score, thresholds strictly decreasing. The last
/// point predicts every row positive.
pub fn threshold_sweep(labels: &[bool], scores: &[f64]) -> Result<Vec<CurvePoint>> {
    check_lengths(labels, scores)?;
    let (pos, neg) = class_totals(labels);
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let rate = |k: usize, total: usize| if total == 0 { 0.0 } else { k as f64 / total as f64 };

    let (mut tp, mut fp) = (0usize, 0usize);
    let mut points = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(CurvePoint {
            threshold: s,
            recall: rate(tp, pos),
            false_positive_rate: rate(fp, neg),
            precision: Some(tp as f64 / (tp + fp) as f64),
        });
    }
    Ok(points)
}

/// The sweep prefixed with the origin `(0, 0)` at threshold `+inf`; it ends
/// at `(1, 1)`.
pub fn roc_curve(labels: &[bool], scores: &[f64]) -> Result<Vec<CurvePoint>> {
    check_lengths(labels, scores)?;
    let (pos, neg) = class_totals(labels);
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate(
            "ROC curve needs both positive and negative labels".into(),
        ));
    }
    let mut points = vec![CurvePoint {
        threshold: f64::INFINITY,
        recall: 0.0,
        false_positive_rate: 0.0,
        precision: None,
    }];
    points.extend(threshold_sweep(labels, scores)?);
    Ok(points)
}

/// Trapezoidal area under TPR over FPR.
pub fn trapezoid_auc(points: &[CurvePoint]) -> f64 {
    points
        .windows(2)
        .map(|w| {
            (w[1].false_positive_rate - w[0].false_positive_rate) * (w[0].recall + w[1].recall) / 2.0
        })
        .sum()
}

pub fn roc_auc(labels: &[bool], scores: &[f64]) -> Result<f64> {
    Ok(trapezoid_auc(&roc_curve(labels, scores)?))
}

pub fn pr_curve(labels: &[bool], scores: &[f64]) -> Result<Vec<CurvePoint>> {
    check_lengths(labels, scores)?;
    if class_totals(labels).0 == 0 {
        return Err(Error::Degenerate("PR curve needs positive labels".into()));
    }
    threshold_sweep(labels, scores)
}

/// Step-wise area: each recall increment times the precision reached there.
pub fn step_auc(points: &[CurvePoint]) -> f64 {
    let mut prev_recall = 0.0;
    let mut area = 0.0;
    for p in points {
        area += (p.recall - prev_recall) * p.precision.unwrap_or(0.0);
        prev_recall = p.recall;
    }
    area
}

pub fn pr_auc(labels: &[bool], scores: &[f64]) -> Result<f64> {
    Ok(step_auc(&pr_curve(labels, scores)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separating_scores() {
        let y = [false, false, true, true];
        let s = [0.1, 0.2, 0.8, 0.9];
        assert_eq!(roc_auc(&y, &s).unwrap(), 1.0);
        assert_eq!(pr_auc(&y, &s).unwrap(), 1.0);
    }

    #[test]
    fn constant_scores() {
        let y = [false, true, true, false, false];
        let s = [0.3; 5];
        assert_eq!(roc_auc(&y, &s).unwrap(), 0.5);
        assert!((pr_auc(&y, &s).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(threshold_sweep(&y, &s).unwrap().len(), 1);
    }

    #[test]
    fn degenerate_labels() {
        assert!(matches!(roc_auc(&[true, true], &[0.1, 0.2]), Err(Error::Degenerate(_))));
        assert!(matches!(pr_auc(&[false], &[0.1]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn curve_shape() {
        let y = [true, false, true, false, true];
        let s = [0.9, 0.8, 0.8, 0.3, 0.1];
        let c = roc_curve(&y, &s).unwrap();
        assert_eq!(c.len(), 5);
        assert!(c.windows(2).all(|w| w[0].threshold > w[1].threshold));
        let last = c.last().unwrap();
        assert_eq!((last.recall, last.false_positive_rate), (1.0, 1.0));
    }
}
