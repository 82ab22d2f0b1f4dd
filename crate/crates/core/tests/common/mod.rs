//! Independent oracles and fixtures shared by the integration suites.
#![allow(dead_code)]

use minibqml::matrix::Matrix;
use minibqml::sql::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- queries

pub const IMPUTE_QUERY: &str = "SELECT *,
        COALESCE(age, 50) AS age_imputed
FROM diabetes_data;";

pub const ONE_HOT_QUERY: &str = "SELECT *,
        CASE WHEN gender = 'Male' THEN 1 ELSE 0 END AS gender_male,
        CASE WHEN gender = 'Female' THEN 1 ELSE 0 END AS gender_female
FROM diabetes_data;";

pub const CORR_QUERY: &str = "SELECT CORR(feature_value, diabetes_binary) AS correlation
FROM diabetes_data;";

pub const CASE_STUDY_MODEL: &str = "CREATE OR REPLACE MODEL `project_id.dataset_id.diabetes_model`
OPTIONS(
  model_type = 'boosted_tree_classifier',
  input_label_cols = ['Diabetes_binary'],
  data_split_method = 'RANDOM',
  data_split_eval_fraction = 0.2,
  max_iterations = 150,
  learn_rate = 0.05,
  min_rel_progress = 0.00001,
  l1_reg = 0.1,
  l2_reg = 2.0
) AS
SELECT
  *
FROM
  `project_id.dataset_id.diabetes_data`
WHERE
  Diabetes_binary IS NOT NULL;";

// ------------------------------------------------------ statement generator

const NAMES: &[&str] = &["a", "b", "age", "BMI", "Diabetes_binary", "x_1", "my col", "select", "gender"];
const TABLES: &[&str] = &["t", "diabetes_data", "project_id", "dataset_id", "from"];
const NUMBERS: &[f64] = &[0.0, 1.0, 2.0, 50.0, -3.0, 0.5, 1e-5, 2.25, -0.125, 123456.75, 2.5e20, 1e15];
const STRINGS: &[&str] = &["Male", "Female", "it's", "", "a;b", "--not a comment"];

fn pick<'a, T>(r: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(r).expect("nonempty")
}

fn gen_literal(r: &mut ChaCha8Rng) -> Expr {
    match r.gen_range(0..4) {
        0 | 1 => Expr::number(*pick(r, NUMBERS)),
        2 => Expr::Literal(Literal::String(pick(r, STRINGS).to_string())),
        _ => Expr::Literal(Literal::Null),
    }
}

/// Random scalar expression without aggregates.
pub fn gen_expr(r: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || r.gen_bool(0.25) {
        return if r.gen_bool(0.6) {
            Expr::column(*pick(r, NAMES))
        } else {
            gen_literal(r)
        };
    }
    let d = depth - 1;
    match r.gen_range(0..7) {
        0 => Expr::Unary {
            op: if r.gen_bool(0.5) { UnaryOp::Not } else { UnaryOp::Neg },
            expr: Box::new(gen_expr(r, d)),
        },
        1 | 2 => {
            let ops = [
                BinaryOp::Eq,
                BinaryOp::NotEq,
                BinaryOp::Lt,
                BinaryOp::LtEq,
                BinaryOp::Gt,
                BinaryOp::GtEq,
                BinaryOp::Plus,
                BinaryOp::Minus,
                BinaryOp::Multiply,
                BinaryOp::Divide,
                BinaryOp::And,
                BinaryOp::Or,
            ];
            Expr::binary(*pick(r, &ops), gen_expr(r, d), gen_expr(r, d))
        }
        3 => Expr::IsNull {
            expr: Box::new(gen_expr(r, d)),
            negated: r.gen_bool(0.5),
        },
        4 => Expr::Case {
            branches: (0..r.gen_range(1..=3)).map(|_| (gen_expr(r, d), gen_expr(r, d))).collect(),
            else_result: r.gen_bool(0.5).then(|| Box::new(gen_expr(r, d))),
        },
        5 => Expr::Coalesce((0..r.gen_range(1..=3)).map(|_| gen_expr(r, d)).collect()),
        _ => gen_literal(r),
    }
}

fn gen_aggregate(r: &mut ChaCha8Rng) -> Expr {
    let funcs = [
        AggregateFunc::Count,
        AggregateFunc::Sum,
        AggregateFunc::Avg,
        AggregateFunc::Min,
        AggregateFunc::Max,
        AggregateFunc::Corr,
    ];
    let func = *pick(r, &funcs);
    let args = if func == AggregateFunc::Count && r.gen_bool(0.3) {
        vec![Expr::Star]
    } else {
        (0..func.arity()).map(|_| gen_expr(r, 2)).collect()
    };
    Expr::Aggregate { func, args }
}

fn gen_name(r: &mut ChaCha8Rng) -> QualifiedName {
    QualifiedName((0..r.gen_range(1..=3)).map(|_| pick(r, TABLES).to_string()).collect())
}

pub fn gen_select(r: &mut ChaCha8Rng) -> SelectStmt {
    let aggregate = r.gen_bool(0.2);
    let mut projections = Vec::new();
    if !aggregate && r.gen_bool(0.3) {
        projections.push(Projection { expr: Expr::Star, alias: None });
    }
    for _ in 0..r.gen_range(1..=3) {
        let expr = if aggregate {
            let agg = gen_aggregate(r);
            if r.gen_bool(0.3) {
                Expr::binary(BinaryOp::Plus, agg, Expr::number(1.0))
            } else {
                agg
            }
        } else {
            gen_expr(r, 3)
        };
        let alias = r.gen_bool(0.5).then(|| pick(r, NAMES).to_string());
        projections.push(Projection { expr, alias });
    }
    SelectStmt {
        projections,
        from: gen_name(r),
        filter: r.gen_bool(0.5).then(|| gen_expr(r, 3)),
    }
}

fn gen_option(r: &mut ChaCha8Rng, key: &str) -> ModelOption {
    use OptionLiteral as L;
    let lit = match key {
        "model_type" => L::String(pick(r, &["logistic_reg", "boosted_tree_classifier", "dnn_classifier"]).to_string()),
        "input_label_cols" => L::List(vec![L::String(pick(r, NAMES).to_string())]),
        "data_split_method" => L::String(pick(r, &["RANDOM", "NO_SPLIT"]).to_string()),
        "data_split_eval_fraction" => L::Number(*pick(r, &[0.2, 0.1, 0.5, 0.333])),
        "learn_rate" | "min_rel_progress" => L::Number(*pick(r, &[0.05, 0.3, 1e-5, 2.0])),
        "l1_reg" | "l2_reg" => L::Number(*pick(r, &[0.0, 0.1, 2.0, 1e-3])),
        "hidden_units" => L::List((0..r.gen_range(0..=3)).map(|_| L::Number(r.gen_range(1..128) as f64)).collect()),
        "max_tree_depth" => L::Number(r.gen_range(1..=64) as f64),
        "seed" => L::Number(r.gen_range(0..1_000_000) as f64),
        _ => L::Number(r.gen_range(1..500) as f64),
    };
    ModelOption::from_literal(key, &lit).expect("generated option is in its domain")
}

pub fn gen_statement(r: &mut ChaCha8Rng) -> Statement {
    match r.gen_range(0..8) {
        0 | 1 | 2 => Statement::Select(gen_select(r)),
        3 => {
            let mut options = OptionsMap::new();
            options.insert(gen_option(r, "model_type"));
            let mut keys: Vec<&str> = OPTION_KEYS.iter().copied().filter(|k| *k != "model_type").collect();
            keys.shuffle(r);
            for k in keys.into_iter().take(r.gen_range(0..6)) {
                options.insert(gen_option(r, k));
            }
            Statement::CreateModel(CreateModelStmt {
                name: gen_name(r),
                replace: r.gen_bool(0.5),
                options,
                query: gen_select(r),
            })
        }
        4 => Statement::CreateTableFromCsv(CreateTableFromCsvStmt {
            name: gen_name(r),
            replace: r.gen_bool(0.5),
            path: pick(r, &["data/x.csv", "/tmp/it's here.csv", "a b.csv"]).to_string(),
        }),
        5 => Statement::MlEvaluate(MlEvaluateStmt {
            model: gen_name(r),
            input: r.gen_bool(0.5).then(|| gen_select(r)),
        }),
        6 => Statement::MlPredict(MlPredictStmt {
            model: gen_name(r),
            input: gen_select(r),
            threshold: *pick(r, &[0.5, 0.0, 1.0, 0.25, 0.875]),
        }),
        _ => {
            let model = gen_name(r);
            if r.gen_bool(0.5) {
                Statement::MlFeatureImportance { model }
            } else {
                Statement::MlRocCurve { model }
            }
        }
    }
}

// ------------------------------------------------------------- metric oracles

/// Per-row recount of the confusion cells and every metric.
pub struct NaiveMetrics {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: f64,
    pub f1: Option<f64>,
    pub log_loss: f64,
}

pub fn naive_metrics(labels: &[bool], scores: &[f64], threshold: f64) -> NaiveMetrics {
    let (mut tp, mut fp, mut tn, mut fn_) = (0u64, 0u64, 0u64, 0u64);
    let mut ll = 0.0;
    for i in 0..labels.len() {
        let predicted = scores[i] >= threshold;
        if labels[i] && predicted {
            tp += 1
        } else if labels[i] {
            fn_ += 1
        } else if predicted {
            fp += 1
        } else {
            tn += 1
        }
        let p = scores[i].max(1e-15).min(1.0 - 1e-15);
        ll -= if labels[i] { p.ln() } else { (1.0 - p).ln() };
    }
    let precision = if tp + fp == 0 { None } else { Some(tp as f64 / (tp + fp) as f64) };
    let recall = if tp + fn_ == 0 { None } else { Some(tp as f64 / (tp + fn_) as f64) };
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    NaiveMetrics {
        tp,
        fp,
        tn,
        fn_,
        precision,
        recall,
        accuracy: (tp + tn) as f64 / labels.len() as f64,
        f1,
        log_loss: ll / labels.len() as f64,
    }
}

/// Fraction of (positive, negative) pairs ranked correctly, ties counting half.
pub fn pair_auc(labels: &[bool], scores: &[f64]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if labels[i] && !labels[j] {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0
                } else if scores[i] == scores[j] {
                    wins += 0.5
                }
            }
        }
    }
    wins / pairs
}

/// Random labelled instance with both classes and some tied scores.
pub fn random_instance(r: &mut ChaCha8Rng, max_n: usize) -> (Vec<bool>, Vec<f64>) {
    loop {
        let n = r.gen_range(2..=max_n);
        let labels: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        let coarse = r.gen_bool(0.5);
        let scores: Vec<f64> = (0..n)
            .map(|_| if coarse { r.gen_range(0..5) as f64 / 4.0 } else { r.gen::<f64>() })
            .collect();
        if labels.iter().any(|&y| y) && labels.iter().any(|&y| !y) {
            return (labels, scores);
        }
    }
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn close_opt(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => close(a, b, tol),
        (None, None) => true,
        _ => false,
    }
}

// ------------------------------------------------------ finite differences

/// Largest relative error between `analytic` and central differences of `f`
/// at `theta` with step `h`. Relative to max(|fd|, |analytic|, 1e-6)... kept
/// strict: the denominator floor only guards exact zeros.
pub fn max_rel_error(theta: &[f64], analytic: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    let mut t = theta.to_vec();
    for i in 0..theta.len() {
        t[i] = theta[i] + h;
        let up = f(&t);
        t[i] = theta[i] - h;
        let down = f(&t);
        t[i] = theta[i];
        let fd = (up - down) / (2.0 * h);
        let scale = fd.abs().max(analytic[i].abs()).max(1e-6);
        worst = worst.max((fd - analytic[i]).abs() / scale);
    }
    worst
}

// ------------------------------------------------------------ data fixtures

/// `n` rows of `d` standard-ish features with labels from a noisy linear rule.
pub fn linear_fixture(seed: u64, n: usize, d: usize) -> (Matrix, Vec<f64>) {
    let mut r = rng(seed);
    let w: Vec<f64> = (0..d).map(|_| r.gen_range(-2.0..2.0)).collect();
    let mut rows = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let x: Vec<f64> = (0..d).map(|_| r.gen_range(-1.5..1.5)).collect();
        let z: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + r.gen_range(-1.0..1.0);
        // keep both classes present
        y.push(if i < 2 { i as f64 } else { (z > 0.0) as u8 as f64 });
        rows.push(x);
    }
    (Matrix::from_rows(&rows), y)
}
