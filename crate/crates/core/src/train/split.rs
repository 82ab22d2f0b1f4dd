use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::storage::Table;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub train_rows: Table,
    pub eval_rows: Table,
    pub seed_used: u64,
}

/// Row indices of a seeded split: `(train, eval)`, each in ascending order.
/// The eval set is the first `floor(n * eval_fraction)` rows of a seeded
/// shuffle.
pub fn split_indices(n: usize, eval_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(eval_fraction > 0.0 && eval_fraction < 1.0) {
        return Err(Error::Split(format!(
            "eval fraction {eval_fraction} must lie in (0, 1)"
        )));
    }
    let n_eval = (n as f64 * eval_fraction).floor() as usize;
    if n < 2 || n_eval == 0 || n_eval >= n {
        return Err(Error::Split(format!(
            "splitting {n} rows with eval fraction {eval_fraction} leaves an empty side"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut eval = order[..n_eval].to_vec();
    let mut train = order[n_eval..].to_vec();
    eval.sort_unstable();
    train.sort_unstable();
    Ok((train, eval))
}

pub fn split_random(rows: &Table, eval_fraction: f64, seed: u64) -> Result<SplitResult> {
    let (train, eval) = split_indices(rows.row_count(), eval_fraction, seed)?;
    Ok(SplitResult {
        train_rows: rows.take_rows(&train),
        eval_rows: rows.take_rows(&eval),
        seed_used: seed,
    })
}
