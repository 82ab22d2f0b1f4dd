mod common;

use common::*;
use minibqml::matrix::Matrix;
use minibqml::sql::ModelType;
use minibqml::train::dnn::Net;
use minibqml::train::linear::{objective, objective_and_gradient, LinearParams};
use minibqml::train::tree::{leaf_weight, split_gain};
use minibqml::train::*;
use rand::Rng;

fn defaults(t: ModelType) -> TrainOptions {
    TrainOptions::defaults(t)
}

#[test]
fn logistic_gradient_matches_finite_differences() {
    for seed in 0..20 {
        let mut r = rng(seed);
        let (x, y) = linear_fixture(seed, 30, 4);
        let l2 = r.gen_range(0.0..3.0);
        let params = LinearParams {
            weights: (0..4).map(|_| r.gen_range(-1.0..1.0)).collect(),
            intercept: r.gen_range(-1.0..1.0),
        };
        let (_, gw, gb) = objective_and_gradient(&params, &x, &y, l2);
        let theta: Vec<f64> = params.weights.iter().copied().chain([params.intercept]).collect();
        let analytic: Vec<f64> = gw.into_iter().chain([gb]).collect();
        let err = max_rel_error(&theta, &analytic, 1e-5, |t| {
            let p = LinearParams { weights: t[..4].to_vec(), intercept: t[4] };
            objective(&p, &x, &y, 0.0, l2)
        });
        assert!(err < 1e-5, "seed {seed}: relative error {err}");
    }
}

#[test]
fn dnn_gradient_matches_finite_differences() {
    for seed in 0..20 {
        let mut r = rng(seed);
        let (x, y) = linear_fixture(seed + 100, 12, 3);
        let net = Net::init(vec![3, 3, 1], &mut r);
        let rows: Vec<usize> = (0..12).collect();
        let mut grad = vec![0.0; net.theta.len()];
        net.objective_and_gradient(&x, &y, &rows, 0.7, 12, &mut grad);
        let err = max_rel_error(&net.theta, &grad, 1e-5, |t| {
            let mut n = net.clone();
            n.theta.copy_from_slice(t);
            n.objective(&x, &y, 0.7)
        });
        assert!(err < 1e-4, "seed {seed}: relative error {err}");
    }
}

#[test]
fn dnn_learns_xor() {
    let x = Matrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
    let y = [0.0, 1.0, 1.0, 0.0];
    let successes = (0..5)
        .filter(|&seed| {
            let o = TrainOptions {
                hidden_units: vec![4],
                max_iterations: 500,
                min_rel_progress: 1e-12,
                l2_reg: 0.0,
                learn_rate: 0.02,
                seed,
                ..defaults(ModelType::DnnClassifier)
            };
            let out = train_dnn(&x, &y, &o).unwrap();
            let p = ModelParams::Dnn(out.params).predict_proba(&x);
            p.iter().zip(&y).all(|(p, t)| (*p >= 0.5) == (*t == 1.0))
        })
        .count();
    assert!(successes >= 4, "only {successes}/5 seeds solved XOR");
}

#[test]
fn dnn_without_hidden_layers_matches_logistic() {
    let (x, y) = linear_fixture(5, 200, 3);
    let lin = train_logistic(
        &x,
        &y,
        &TrainOptions { max_iterations: 2000, min_rel_progress: 1e-10, learn_rate: 0.5, ..defaults(ModelType::LogisticReg) },
    )
    .unwrap();
    let dnn = train_dnn(
        &x,
        &y,
        &TrainOptions {
            hidden_units: vec![],
            max_iterations: 300,
            min_rel_progress: 1e-10,
            learn_rate: 0.05,
            batch_size: 32,
            ..defaults(ModelType::DnnClassifier)
        },
    )
    .unwrap();
    let (a, b) = (lin.log.last().unwrap().train_loss, dnn.log.last().unwrap().train_loss);
    assert!((a - b).abs() < 0.02, "logistic {a} vs dnn {b}");
}

#[test]
fn logistic_more_iterations_never_hurt() {
    let (x, y) = linear_fixture(8, 150, 5);
    let run = |iters| {
        let o = TrainOptions { max_iterations: iters, min_rel_progress: 1e-12, ..defaults(ModelType::LogisticReg) };
        train_logistic(&x, &y, &o).unwrap().log
    };
    let (short, long) = (run(40), run(80));
    assert!(long.last().unwrap().train_loss <= short.last().unwrap().train_loss);
    assert!(short.last().unwrap().train_loss <= short[0].train_loss);
}

#[test]
fn boosting_loss_is_monotone() {
    for seed in 0..5 {
        let (x, y) = linear_fixture(seed * 7 + 1, 300, 4);
        let o = TrainOptions {
            max_iterations: 150,
            min_rel_progress: 1e-15,
            ..defaults(ModelType::BoostedTreeClassifier)
        };
        let out = train_boosted_tree(&x, &y, &o).unwrap();
        for w in out.log.windows(2) {
            assert!(w[1].train_loss <= w[0].train_loss + 1e-9, "seed {seed}: {w:?}");
        }
        for t in &out.params.trees {
            assert!(t.depth() <= 6);
            t.for_each_split(&mut |f, g| assert!(f < 4 && g > 0.0));
        }
    }
}

#[test]
fn leaf_weight_unit_cases() {
    assert!((leaf_weight(2.0, 3.0, 0.0, 2.0) + 0.4).abs() < 1e-15);
    assert!((leaf_weight(2.0, 3.0, 0.1, 2.0) + 0.38).abs() < 1e-15);
    assert_eq!(leaf_weight(0.05, 3.0, 0.1, 2.0), 0.0);
    assert_eq!(split_gain(1.0, 1.0, -1.0, 1.0, 0.0, 2.0, 0.0), 1.0);
}

#[test]
fn single_feature_split_lands_between_classes() {
    let x = Matrix::from_rows(&[vec![0.1], vec![0.2], vec![0.4], vec![0.6], vec![0.8], vec![0.9]]);
    let y = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
    let out = train_boosted_tree(&x, &y, &TrainOptions { l2_reg: 0.0, ..defaults(ModelType::BoostedTreeClassifier) }).unwrap();
    match &out.params.trees[0] {
        TreeNode::Split { feature, threshold, .. } => {
            assert_eq!(*feature, 0);
            assert!(*threshold > 0.4 && *threshold <= 0.6, "{threshold}");
        }
        leaf => panic!("expected a split, got {leaf:?}"),
    }
}

#[test]
fn stored_gains_match_child_statistics() {
    let (x, y) = linear_fixture(3, 200, 3);
    let o = TrainOptions { max_iterations: 10, ..defaults(ModelType::BoostedTreeClassifier) };
    let out = train_boosted_tree(&x, &y, &o).unwrap();
    fn check(node: &TreeNode, l2: f64) {
        if let TreeNode::Split { gain, grad_sum, hess_sum, left, right, .. } = node {
            let ((gl, hl), (gr, hr)) = (left.stats(), right.stats());
            let expected = split_gain(gl, hl, gr, hr, *grad_sum, *hess_sum, l2);
            assert_eq!(*gain, expected);
            assert!((grad_sum - (gl + gr)).abs() < 1e-9 && (hess_sum - (hl + hr)).abs() < 1e-9);
            check(left, l2);
            check(right, l2);
        }
    }
    for t in &out.params.trees {
        check(t, o.l2_reg);
    }
}

#[test]
fn zero_models_predict_the_prior() {
    let x = Matrix::from_rows(&[vec![1.0], vec![2.0]]);
    let lin = ModelParams::Linear(LinearParams { weights: vec![0.0], intercept: 0.0 });
    assert_eq!(lin.predict_proba(&x), vec![0.5, 0.5]);
    let trees = ModelParams::BoostedTree(TreeEnsembleParams { base_score: (0.25f64 / 0.75).ln(), shrinkage: 0.3, trees: vec![] });
    assert!(trees.predict_proba(&x).iter().all(|p| (p - 0.25).abs() < 1e-15));
}

#[test]
fn trainers_are_deterministic() {
    let (x, y) = linear_fixture(4, 120, 3);
    for t in [ModelType::LogisticReg, ModelType::BoostedTreeClassifier, ModelType::DnnClassifier] {
        let o = TrainOptions { max_iterations: 8, hidden_units: vec![5], ..defaults(t) };
        let run = || match t {
            ModelType::LogisticReg => format!("{:?}", train_logistic(&x, &y, &o).unwrap()),
            ModelType::BoostedTreeClassifier => format!("{:?}", train_boosted_tree(&x, &y, &o).unwrap()),
            ModelType::DnnClassifier => format!("{:?}", train_dnn(&x, &y, &o).unwrap()),
        };
        assert_eq!(run(), run());
    }
}
