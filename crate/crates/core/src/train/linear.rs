//! Logistic regression by full-batch proximal gradient descent.
//!
//! Objective: mean logistic loss + `l2 * |w|^2 / (2n)` + `l1 * |w|_1`.
//! Each iteration takes a gradient step on the smooth part with step
//! `learn_rate`, then soft-thresholds the weights by `learn_rate * l1`.
//! The intercept is never regularized. Weights start at zero.

use serde::{Deserialize, Serialize};

use super::{
    check_training_data, convergence_warning, logistic_loss, should_stop, sigmoid, LogEntry,
    TrainOptions, TrainOutput,
};
use crate::error::Result;
use crate::matrix::{dot, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearParams {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearParams {
    pub fn zeros(width: usize) -> Self {
        LinearParams {
            weights: vec![0.0; width],
            intercept: 0.0,
        }
    }

    #[inline]
    pub fn margin(&self, row: &[f64]) -> f64 {
        dot(&self.weights, row) + self.intercept
    }
}

/// Smooth part of the objective and its gradient `(loss, dL/dw, dL/db)`.
pub fn objective_and_gradient(
    params: &LinearParams,
    x: &Matrix,
    y: &[f64],
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.rows() as f64;
    let mut grad_w = vec![0.0; x.cols()];
    let mut grad_b = 0.0;
    let mut loss = 0.0;
    for (r, &label) in y.iter().enumerate() {
        let row = x.row(r);
        let z = params.margin(row);
        loss += logistic_loss(z, label);
        let residual = sigmoid(z) - label;
        grad_b += residual;
        for (g, &xv) in grad_w.iter_mut().zip(row) {
            *g += residual * xv;
        }
    }
    let sq: f64 = params.weights.iter().map(|w| w * w).sum();
    for (g, w) in grad_w.iter_mut().zip(&params.weights) {
        *g = *g / n + l2 * w / n;
    }
    (loss / n + l2 * sq / (2.0 * n), grad_w, grad_b / n)
}

/// Full objective including the L1 term.
pub fn objective(params: &LinearParams, x: &Matrix, y: &[f64], l1: f64, l2: f64) -> f64 {
    let n = x.rows() as f64;
    let mut loss = 0.0;
    for (r, &label) in y.iter().enumerate() {
        loss += logistic_loss(params.margin(x.row(r)), label);
    }
    let sq: f64 = params.weights.iter().map(|w| w * w).sum();
    let abs: f64 = params.weights.iter().map(|w| w.abs()).sum();
    loss / n + l2 * sq / (2.0 * n) + l1 * abs
}

#[inline]
pub fn soft_threshold(w: f64, t: f64) -> f64 {
    w.signum() * (w.abs() - t).max(0.0)
}

pub fn train_logistic(x: &Matrix, y: &[f64], opts: &TrainOptions) -> Result<TrainOutput<LinearParams>> {
    check_training_data(x, y)?;
    let step = opts.learn_rate;
    let threshold = step * opts.l1_reg;
    let mut params = LinearParams::zeros(x.cols());
    let mut prev = objective(&params, x, y, opts.l1_reg, opts.l2_reg);
    let mut log = vec![LogEntry {
        iteration: 0,
        train_loss: prev,
    }];
    let mut warnings = Vec::new();

    for iteration in 1..=opts.max_iterations as usize {
        let (_, grad_w, grad_b) = objective_and_gradient(&params, x, y, opts.l2_reg);
        for (w, g) in params.weights.iter_mut().zip(&grad_w) {
            *w = soft_threshold(*w - step * g, threshold);
        }
        params.intercept -= step * grad_b;

        let cur = objective(&params, x, y, opts.l1_reg, opts.l2_reg);
        log.push(LogEntry {
            iteration,
            train_loss: cur,
        });
        if should_stop(prev, cur, opts.min_rel_progress) {
            break;
        }
        if iteration == opts.max_iterations as usize {
            warnings.extend(convergence_warning(
                "logistic_reg",
                iteration,
                prev,
                cur,
                opts.min_rel_progress,
            ));
        }
        prev = cur;
    }

    Ok(TrainOutput {
        params,
        log,
        warnings,
    })
}
