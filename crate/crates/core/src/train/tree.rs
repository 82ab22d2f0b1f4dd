//! Second-order gradient boosting of regression trees on the logistic loss.
//!
//! Each round computes `g = p - y` and `h = p (1 - p)` at the current margins
//! and grows one tree by exact greedy search over the sorted distinct values
//! of every feature. A split is kept only when its gain
//!
//! ```text
//! gain = 1/2 [ GL^2/(HL+l2) + GR^2/(HR+l2) - G^2/(H+l2) ]
//! ```
//!
//! is positive. Leaves get `-sign(G) max(|G| - l1, 0) / (H + l2)`, and the
//! margins move by `learn_rate` times the leaf weight. Thresholds are
//! midpoints between consecutive distinct values; rows with `x < threshold`
//! go left. Gain ties go to the lowest feature index, then the lowest
//! threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_training_data, convergence_warning, logistic_loss, should_stop, sigmoid, LogEntry,
    TrainOptions, TrainOutput,
};
use crate::error::Result;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        gain: f64,
        grad_sum: f64,
        hess_sum: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        weight: f64,
        grad_sum: f64,
        hess_sum: f64,
    },
}

impl TreeNode {
    pub fn leaf_weight(&self, row: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { weight, .. } => return *weight,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    node = if row[*feature] < *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn stats(&self) -> (f64, f64) {
        match self {
            TreeNode::Leaf {
                grad_sum, hess_sum, ..
            }
            | TreeNode::Split {
                grad_sum, hess_sum, ..
            } => (*grad_sum, *hess_sum),
        }
    }

    /// Calls `f(feature, gain)` for every split node, depth-first.
    pub fn for_each_split(&self, f: &mut impl FnMut(usize, f64)) {
        if let TreeNode::Split {
            feature,
            gain,
            left,
            right,
            ..
        } = self
        {
            f(*feature, *gain);
            left.for_each_split(f);
            right.for_each_split(f);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeEnsembleParams {
    /// Log-odds of the training positive rate.
    pub base_score: f64,
    pub shrinkage: f64,
    pub trees: Vec<TreeNode>,
}

impl TreeEnsembleParams {
    pub fn margin(&self, row: &[f64]) -> f64 {
        self.base_score
            + self.shrinkage * self.trees.iter().map(|t| t.leaf_weight(row)).sum::<f64>()
    }
}

#[inline]
pub fn split_gain(gl: f64, hl: f64, gr: f64, hr: f64, g: f64, h: f64, l2: f64) -> f64 {
    0.5 * (gl * gl / (hl + l2) + gr * gr / (hr + l2) - g * g / (h + l2))
}

#[inline]
pub fn leaf_weight(g: f64, h: f64, l1: f64, l2: f64) -> f64 {
    -g.signum() * (g.abs() - l1).max(0.0) / (h + l2)
}

/// Sorted distinct values of one feature and each row's index into them.
struct FeatureBins {
    values: Vec<f64>,
    bin_of_row: Vec<u32>,
}

impl FeatureBins {
    fn build(x: &Matrix, feature: usize) -> Self {
        let col = x.column(feature);
        let mut values = col.clone();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let bin_of_row = col
            .iter()
            .map(|v| values.partition_point(|u| u < v) as u32)
            .collect();
        FeatureBins { values, bin_of_row }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

struct Builder<'a> {
    x: &'a Matrix,
    bins: Vec<FeatureBins>,
    grad: Vec<f64>,
    hess: Vec<f64>,
    l1: f64,
    l2: f64,
    max_depth: usize,
}

impl Builder<'_> {
    fn sums(&self, rows: &[u32]) -> (f64, f64) {
        let mut g = 0.0;
        let mut h = 0.0;
        for &r in rows {
            g += self.grad[r as usize];
            h += self.hess[r as usize];
        }
        (g, h)
    }

    fn best_for_feature(&self, feature: usize, rows: &[u32], g: f64, h: f64) -> Option<Candidate> {
        let bins = &self.bins[feature];
        let nbins = bins.values.len();
        if nbins < 2 {
            return None;
        }
        // (bin, grad, hess) accumulated in ascending bin order
        let groups: Vec<(usize, f64, f64)> = if rows.len() * 4 < nbins {
            let mut items: Vec<(u32, u32)> = rows
                .iter()
                .map(|&r| (bins.bin_of_row[r as usize], r))
                .collect();
            items.sort_unstable();
            let mut out: Vec<(usize, f64, f64)> = Vec::new();
            for (b, r) in items {
                let (gr, hr) = (self.grad[r as usize], self.hess[r as usize]);
                match out.last_mut() {
                    Some(last) if last.0 == b as usize => {
                        last.1 += gr;
                        last.2 += hr;
                    }
                    _ => out.push((b as usize, gr, hr)),
                }
            }
            out
        } else {
            let mut hist = vec![(0.0f64, 0.0f64, 0u32); nbins];
            for &r in rows {
                let slot = &mut hist[bins.bin_of_row[r as usize] as usize];
                slot.0 += self.grad[r as usize];
                slot.1 += self.hess[r as usize];
                slot.2 += 1;
            }
            hist.into_iter()
                .enumerate()
                .filter(|(_, s)| s.2 > 0)
                .map(|(b, s)| (b, s.0, s.1))
                .collect()
        };

        let mut best: Option<Candidate> = None;
        let (mut gl, mut hl) = (0.0, 0.0);
        for pair in groups.windows(2) {
            let (b_lo, g_lo, h_lo) = pair[0];
            let b_hi = pair[1].0;
            gl += g_lo;
            hl += h_lo;
            let gain = split_gain(gl, hl, g - gl, h - hl, g, h, self.l2);
            if gain > 0.0 && best.is_none_or(|c| gain > c.gain) {
                best = Some(Candidate {
                    feature,
                    threshold: 0.5 * (bins.values[b_lo] + bins.values[b_hi]),
                    gain,
                });
            }
        }
        best
    }

    fn best_split(&self, rows: &[u32], g: f64, h: f64) -> Option<Candidate> {
        let per_feature: Vec<Option<Candidate>> = (0..self.bins.len())
            .into_par_iter()
            .map(|f| self.best_for_feature(f, rows, g, h))
            .collect();
        // sequential reduction keeps tie-breaking deterministic
        let mut best: Option<Candidate> = None;
        for c in per_feature.into_iter().flatten() {
            if best.is_none_or(|b| c.gain > b.gain) {
                best = Some(c);
            }
        }
        best
    }

    /// Grows a subtree over `rows` (ascending) and records each row's leaf
    /// weight in `out`.
    fn grow(&self, rows: Vec<u32>, depth: usize, out: &mut [f64]) -> TreeNode {
        let (g, h) = self.sums(&rows);
        if depth < self.max_depth {
            if let Some(c) = self.best_split(&rows, g, h) {
                let (left, right): (Vec<u32>, Vec<u32>) = rows
                    .iter()
                    .partition(|&&r| self.x.get(r as usize, c.feature) < c.threshold);
                let (gl, hl) = self.sums(&left);
                let (gr, hr) = self.sums(&right);
                // recorded gain comes from the stored node statistics
                let gain = split_gain(gl, hl, gr, hr, g, h, self.l2);
                if gain > 0.0 {
                    let left = self.grow(left, depth + 1, out);
                    let right = self.grow(right, depth + 1, out);
                    return TreeNode::Split {
                        feature: c.feature,
                        threshold: c.threshold,
                        gain,
                        grad_sum: g,
                        hess_sum: h,
                        left: Box::new(left),
                        right: Box::new(right),
                    };
                }
            }
        }
        let weight = leaf_weight(g, h, self.l1, self.l2);
        for &r in &rows {
            out[r as usize] = weight;
        }
        TreeNode::Leaf {
            weight,
            grad_sum: g,
            hess_sum: h,
        }
    }
}

fn mean_loss(margins: &[f64], y: &[f64]) -> f64 {
    margins
        .iter()
        .zip(y)
        .map(|(&m, &t)| logistic_loss(m, t))
        .sum::<f64>()
        / y.len() as f64
}

pub fn train_boosted_tree(
    x: &Matrix,
    y: &[f64],
    opts: &TrainOptions,
) -> Result<TrainOutput<TreeEnsembleParams>> {
    check_training_data(x, y)?;
    let n = y.len();
    let rate = y.iter().sum::<f64>() / n as f64;
    let base_score = (rate / (1.0 - rate)).ln();

    let mut builder = Builder {
        x,
        bins: (0..x.cols())
            .into_par_iter()
            .map(|f| FeatureBins::build(x, f))
            .collect(),
        grad: vec![0.0; n],
        hess: vec![0.0; n],
        l1: opts.l1_reg,
        l2: opts.l2_reg,
        max_depth: opts.max_tree_depth as usize,
    };

    let mut margins = vec![base_score; n];
    let mut prev = mean_loss(&margins, y);
    let mut log = vec![LogEntry {
        iteration: 0,
        train_loss: prev,
    }];
    let mut trees = Vec::new();
    let mut warnings = Vec::new();
    let mut leaf_of_row = vec![0.0; n];

    for iteration in 1..=opts.max_iterations as usize {
        for i in 0..n {
            let p = sigmoid(margins[i]);
            builder.grad[i] = p - y[i];
            builder.hess[i] = p * (1.0 - p);
        }
        let tree = builder.grow((0..n as u32).collect(), 0, &mut leaf_of_row);
        trees.push(tree);
        for (m, w) in margins.iter_mut().zip(&leaf_of_row) {
            *m += opts.learn_rate * w;
        }

        let cur = mean_loss(&margins, y);
        log.push(LogEntry {
            iteration,
            train_loss: cur,
        });
        if should_stop(prev, cur, opts.min_rel_progress) {
            break;
        }
        if iteration == opts.max_iterations as usize {
            warnings.extend(convergence_warning(
                "boosted_tree_classifier",
                iteration,
                prev,
                cur,
                opts.min_rel_progress,
            ));
        }
        prev = cur;
    }

    Ok(TrainOutput {
        params: TreeEnsembleParams {
            base_score,
            shrinkage: opts.learn_rate,
            trees,
        },
        log,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sql::ModelType;

    fn opts() -> TrainOptions {
        TrainOptions::defaults(ModelType::BoostedTreeClassifier)
    }

    #[test]
    fn leaf_weight_examples() {
        assert!((leaf_weight(2.0, 3.0, 0.0, 2.0) - (-0.4)).abs() < 1e-15);
        assert!((leaf_weight(2.0, 3.0, 0.1, 2.0) - (-0.38)).abs() < 1e-15);
        assert_eq!(leaf_weight(0.05, 3.0, 0.1, 2.0), 0.0);
        assert!((leaf_weight(-2.0, 3.0, 0.1, 2.0) - 0.38).abs() < 1e-15);
    }

    #[test]
    fn perfectly_split_feature_found_at_root() {
        let xs = [0.1, 0.2, 0.3, 0.45, 0.6, 0.7, 0.9, 1.0];
        let x = Matrix::from_vec(8, 1, xs.to_vec());
        let y: Vec<f64> = xs.iter().map(|&v| (v >= 0.5) as u8 as f64).collect();
        let out = train_boosted_tree(&x, &y, &TrainOptions { l2_reg: 0.0, ..opts() }).unwrap();
        let TreeNode::Split {
            feature, threshold, ..
        } = &out.params.trees[0]
        else {
            panic!("root did not split")
        };
        assert_eq!(*feature, 0);
        assert!(*threshold > 0.45 && *threshold <= 0.6, "{threshold}");
    }

    #[test]
    fn zero_trees_predict_positive_rate() {
        let p = TreeEnsembleParams {
            base_score: (0.25f64 / 0.75).ln(),
            shrinkage: 0.3,
            trees: vec![],
        };
        assert!((super::super::sigmoid(p.margin(&[1.0])) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn respects_max_depth_and_feature_bounds() {
        let rows: Vec<Vec<f64>> = (0..64)
            .map(|i| vec![(i % 8) as f64, (i / 8) as f64, ((i * 7) % 5) as f64])
            .collect();
        let y: Vec<f64> = (0..64).map(|i| ((i % 8 + i / 8) % 3 == 0) as u8 as f64).collect();
        let x = Matrix::from_rows(&rows);
        let o = TrainOptions {
            max_tree_depth: 2,
            max_iterations: 10,
            min_rel_progress: 1e-12,
            ..opts()
        };
        let out = train_boosted_tree(&x, &y, &o).unwrap();
        for t in &out.params.trees {
            assert!(t.depth() <= 2);
            t.for_each_split(&mut |f, gain| {
                assert!(f < 3);
                assert!(gain > 0.0);
            });
        }
    }

    #[test]
    fn sparse_node_path_matches_histogram_path() {
        // many distinct values make deep nodes take the sorted-rows path
        let rows: Vec<Vec<f64>> = (0..200).map(|i| vec![((i * 37) % 200) as f64 / 7.0]).collect();
        let y: Vec<f64> = (0..200).map(|i| (((i * 37) % 200) % 3 == 0) as u8 as f64).collect();
        let x = Matrix::from_rows(&rows);
        let b = Builder {
            x: &x,
            bins: vec![FeatureBins::build(&x, 0)],
            grad: y.iter().map(|v| 0.5 - v).collect(),
            hess: vec![0.25; 200],
            l1: 0.0,
            l2: 1.0,
            max_depth: 3,
        };
        let subset: Vec<u32> = (0..200).step_by(9).collect();
        let (g, h) = b.sums(&subset);
        let sparse = b.best_for_feature(0, &subset, g, h).unwrap();
        // force the histogram path by scanning a dense copy
        let dense = {
            let bins = &b.bins[0];
            let mut hist = vec![(0.0, 0.0, 0); bins.values.len()];
            for &r in &subset {
                let s = &mut hist[bins.bin_of_row[r as usize] as usize];
                s.0 += b.grad[r as usize];
                s.1 += b.hess[r as usize];
                s.2 += 1;
            }
            let groups: Vec<_> = hist
                .iter()
                .enumerate()
                .filter(|(_, s)| s.2 > 0)
                .map(|(i, s)| (i, s.0, s.1))
                .collect();
            let mut best = (0.0, f64::NEG_INFINITY);
            let (mut gl, mut hl) = (0.0, 0.0);
            for w in groups.windows(2) {
                gl += w[0].1;
                hl += w[0].2;
                let gain = split_gain(gl, hl, g - gl, h - hl, g, h, 1.0);
                if gain > best.1 {
                    best = (0.5 * (bins.values[w[0].0] + bins.values[w[1].0]), gain);
                }
            }
            best
        };
        assert_eq!(sparse.threshold, dense.0);
        assert_eq!(sparse.gain, dense.1);
    }
}
