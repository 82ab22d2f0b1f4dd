//! Feed-forward network: rectified-linear hidden layers and a single logistic
//! output, trained with mini-batch Adam.
//!
//! Objective: mean logistic loss + `l2 * |W|^2 / (2n)` over all weight
//! matrices (biases unregularized), `n` being the training-set size. One
//! iteration is one epoch over a freshly shuffled row order. Weights start
//! uniform in `±sqrt(6 / fan_in)`, biases at zero.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_training_data, convergence_warning, logistic_loss, should_stop, sigmoid, LogEntry,
    TrainOptions, TrainOutput,
};
use crate::error::Result;
use crate::matrix::Matrix;

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub inputs: usize,
    pub outputs: usize,
    /// Row-major `outputs x inputs`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DnnParams {
    pub layers: Vec<DenseLayer>,
}

/// Network with all parameters in one flat vector: for each layer, its
/// weights (row-major) followed by its biases.
#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    pub theta: Vec<f64>,
}

impl Net {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut total = 0;
        for w in sizes.windows(2) {
            offsets.push(total);
            total += w[0] * w[1] + w[1];
        }
        Net {
            sizes,
            offsets,
            theta: vec![0.0; total],
        }
    }

    /// `[inputs, hidden..., 1]`
    pub fn architecture(inputs: usize, hidden: &[u64]) -> Vec<usize> {
        let mut sizes = vec![inputs];
        sizes.extend(hidden.iter().map(|&h| h as usize));
        sizes.push(1);
        sizes
    }

    pub fn init(sizes: Vec<usize>, rng: &mut impl Rng) -> Self {
        let mut net = Net::new(sizes);
        for l in 0..net.layer_count() {
            let (inp, out) = (net.sizes[l], net.sizes[l + 1]);
            let r = (6.0 / inp.max(1) as f64).sqrt();
            let off = net.offsets[l];
            for w in &mut net.theta[off..off + inp * out] {
                *w = rng.gen_range(-r..r);
            }
        }
        net
    }

    pub fn layer_count(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn weight_range(&self, l: usize) -> std::ops::Range<usize> {
        let off = self.offsets[l];
        off..off + self.sizes[l] * self.sizes[l + 1]
    }

    fn bias_range(&self, l: usize) -> std::ops::Range<usize> {
        let start = self.weight_range(l).end;
        start..start + self.sizes[l + 1]
    }

    pub fn weight_sq_norm(&self) -> f64 {
        (0..self.layer_count())
            .flat_map(|l| self.theta[self.weight_range(l)].iter())
            .map(|w| w * w)
            .sum()
    }

    /// Forward pass storing every layer's pre-activation into `zs` and
    /// post-activation into `acts` (`acts[0]` is the input). Returns the
    /// output margin.
    fn forward(&self, input: &[f64], zs: &mut [Vec<f64>], acts: &mut [Vec<f64>]) -> f64 {
        acts[0].copy_from_slice(input);
        let last = self.layer_count() - 1;
        for l in 0..self.layer_count() {
            let (inp, out) = (self.sizes[l], self.sizes[l + 1]);
            let w = &self.theta[self.weight_range(l)];
            let b = &self.theta[self.bias_range(l)];
            let (prev, rest) = acts.split_at_mut(l + 1);
            let a_in = &prev[l];
            for j in 0..out {
                let row = &w[j * inp..(j + 1) * inp];
                let z = row.iter().zip(a_in).map(|(x, y)| x * y).sum::<f64>() + b[j];
                zs[l][j] = z;
                rest[0][j] = if l == last { z } else { z.max(0.0) };
            }
        }
        zs[last][0]
    }

    fn buffers(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let zs = self.sizes[1..].iter().map(|&s| vec![0.0; s]).collect();
        let acts = self.sizes.iter().map(|&s| vec![0.0; s]).collect();
        (zs, acts)
    }

    pub fn margin(&self, input: &[f64]) -> f64 {
        let (mut zs, mut acts) = self.buffers();
        self.forward(input, &mut zs, &mut acts)
    }

    pub fn margins(&self, x: &Matrix) -> Vec<f64> {
        let (mut zs, mut acts) = self.buffers();
        (0..x.rows())
            .map(|r| self.forward(x.row(r), &mut zs, &mut acts))
            .collect()
    }

    /// Objective restricted to `rows` (mean loss over those rows) plus the
    /// L2 term scaled by `n_total`, and its gradient with respect to `theta`.
    pub fn objective_and_gradient(
        &self,
        x: &Matrix,
        y: &[f64],
        rows: &[usize],
        l2: f64,
        n_total: usize,
        grad: &mut [f64],
    ) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let (mut zs, mut acts) = self.buffers();
        let mut deltas: Vec<Vec<f64>> = self.sizes[1..].iter().map(|&s| vec![0.0; s]).collect();
        let scale = 1.0 / rows.len() as f64;
        let last = self.layer_count() - 1;
        let mut loss = 0.0;

        for &r in rows {
            let z = self.forward(x.row(r), &mut zs, &mut acts);
            loss += logistic_loss(z, y[r]);
            deltas[last][0] = (sigmoid(z) - y[r]) * scale;
            for l in (0..self.layer_count()).rev() {
                let (inp, out) = (self.sizes[l], self.sizes[l + 1]);
                let wr = self.weight_range(l);
                let br = self.bias_range(l);
                for j in 0..out {
                    let d = deltas[l][j];
                    if d == 0.0 {
                        continue;
                    }
                    grad[br.start + j] += d;
                    let g_row = &mut grad[wr.start + j * inp..wr.start + (j + 1) * inp];
                    for (g, a) in g_row.iter_mut().zip(&acts[l]) {
                        *g += d * a;
                    }
                }
                if l > 0 {
                    let w = &self.theta[wr];
                    let (lower, upper) = deltas.split_at_mut(l);
                    let below = &mut lower[l - 1];
                    for (k, slot) in below.iter_mut().enumerate() {
                        *slot = if zs[l - 1][k] > 0.0 {
                            (0..out).map(|j| w[j * inp + k] * upper[0][j]).sum()
                        } else {
                            0.0
                        };
                    }
                }
            }
        }

        let reg = l2 / n_total as f64;
        for l in 0..self.layer_count() {
            for i in self.weight_range(l) {
                grad[i] += reg * self.theta[i];
            }
        }
        loss * scale + 0.5 * reg * self.weight_sq_norm()
    }

    pub fn objective(&self, x: &Matrix, y: &[f64], l2: f64) -> f64 {
        let n = y.len();
        let loss: f64 = self
            .margins(x)
            .iter()
            .zip(y)
            .map(|(&z, &t)| logistic_loss(z, t))
            .sum();
        loss / n as f64 + 0.5 * l2 / n as f64 * self.weight_sq_norm()
    }

    pub fn to_params(&self) -> DnnParams {
        DnnParams {
            layers: (0..self.layer_count())
                .map(|l| DenseLayer {
                    inputs: self.sizes[l],
                    outputs: self.sizes[l + 1],
                    weights: self.theta[self.weight_range(l)].to_vec(),
                    bias: self.theta[self.bias_range(l)].to_vec(),
                })
                .collect(),
        }
    }

    pub fn from_params(p: &DnnParams) -> Self {
        let mut sizes: Vec<usize> = p.layers.first().map(|l| vec![l.inputs]).unwrap_or_default();
        sizes.extend(p.layers.iter().map(|l| l.outputs));
        let mut net = Net::new(sizes);
        for (l, layer) in p.layers.iter().enumerate() {
            let wr = net.weight_range(l);
            let br = net.bias_range(l);
            net.theta[wr].copy_from_slice(&layer.weights);
            net.theta[br].copy_from_slice(&layer.bias);
        }
        net
    }
}

impl DnnParams {
    /// Checks that adjacent layer dimensions agree and buffers have the
    /// declared sizes.
    pub fn is_consistent(&self) -> bool {
        !self.layers.is_empty()
            && self.layers.last().is_some_and(|l| l.outputs == 1)
            && self.layers.windows(2).all(|w| w[0].outputs == w[1].inputs)
            && self
                .layers
                .iter()
                .all(|l| l.weights.len() == l.inputs * l.outputs && l.bias.len() == l.outputs)
    }

    pub fn margin(&self, row: &[f64]) -> f64 {
        Net::from_params(self).margin(row)
    }

    pub fn margins(&self, x: &Matrix) -> Vec<f64> {
        Net::from_params(self).margins(x)
    }
}

pub fn train_dnn(x: &Matrix, y: &[f64], opts: &TrainOptions) -> Result<TrainOutput<DnnParams>> {
    check_training_data(x, y)?;
    let n = y.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut net = Net::init(Net::architecture(x.cols(), &opts.hidden_units), &mut rng);
    let dim = net.theta.len();
    let mut grad = vec![0.0; dim];
    let mut m = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    let mut step: i32 = 0;
    let batch = (opts.batch_size as usize).max(1);
    let mut order: Vec<usize> = (0..n).collect();

    let mut prev = net.objective(x, y, opts.l2_reg);
    let mut log = vec![LogEntry {
        iteration: 0,
        train_loss: prev,
    }];
    let mut warnings = Vec::new();

    for epoch in 1..=opts.max_iterations as usize {
        order.shuffle(&mut rng);
        for rows in order.chunks(batch) {
            net.objective_and_gradient(x, y, rows, opts.l2_reg, n, &mut grad);
            step += 1;
            let c1 = 1.0 - BETA1.powi(step);
            let c2 = 1.0 - BETA2.powi(step);
            for i in 0..dim {
                m[i] = BETA1 * m[i] + (1.0 - BETA1) * grad[i];
                v[i] = BETA2 * v[i] + (1.0 - BETA2) * grad[i] * grad[i];
                let m_hat = m[i] / c1;
                let v_hat = v[i] / c2;
                net.theta[i] -= opts.learn_rate * m_hat / (v_hat.sqrt() + EPSILON);
            }
        }

        let cur = net.objective(x, y, opts.l2_reg);
        log.push(LogEntry {
            iteration: epoch,
            train_loss: cur,
        });
        if should_stop(prev, cur, opts.min_rel_progress) {
            break;
        }
        if epoch == opts.max_iterations as usize {
            warnings.extend(convergence_warning(
                "dnn_classifier",
                epoch,
                prev,
                cur,
                opts.min_rel_progress,
            ));
        }
        prev = cur;
    }

    Ok(TrainOutput {
        params: net.to_params(),
        log,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sql::ModelType;

    #[test]
    fn layout_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let net = Net::init(vec![3, 4, 2, 1], &mut rng);
        assert_eq!(net.theta.len(), 3 * 4 + 4 + 4 * 2 + 2 + 2 + 1);
        let p = net.to_params();
        assert!(p.is_consistent());
        assert_eq!(Net::from_params(&p), net);
        let row = [0.3, -1.0, 2.0];
        assert_eq!(p.margin(&row), net.margin(&row));
    }

    #[test]
    fn no_hidden_layers_is_linear() {
        let mut net = Net::new(vec![2, 1]);
        net.theta.copy_from_slice(&[0.5, -2.0, 0.25]);
        assert_eq!(net.margin(&[1.0, 1.0]), 0.5 - 2.0 + 0.25);
    }

    #[test]
    fn deterministic_given_seed() {
        let x = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 0.0]]);
        let y = [1.0, 1.0, 0.0, 0.0];
        let o = TrainOptions {
            hidden_units: vec![3],
            max_iterations: 20,
            ..TrainOptions::defaults(ModelType::DnnClassifier)
        };
        let a = train_dnn(&x, &y, &o).unwrap();
        let b = train_dnn(&x, &y, &o).unwrap();
        assert_eq!(a.params, b.params);
        assert_eq!(a.log, b.log);
    }
}
