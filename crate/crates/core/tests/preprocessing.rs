mod common;

use common::rng;
use minibqml::eval::ml_evaluate;
use minibqml::preprocess::{FeatureEncoding, PreprocessorState};
use minibqml::sql::ModelType;
use minibqml::storage::{Column, ColumnData, EvalSource, Table};
use minibqml::train::split::{split_indices, split_random};
use minibqml::Engine;
use rand::Rng;
use std::collections::BTreeSet;

fn mixed_table(seed: u64, n: usize) -> Table {
    let mut r = rng(seed);
    let colors = ["red", "green", "blue"];
    Table::new(
        "t",
        vec![
            Column::new("x", ColumnData::Float64((0..n).map(|_| r.gen_bool(0.9).then(|| r.gen_range(-5.0..20.0))).collect())),
            Column::new("k", ColumnData::Int64((0..n).map(|_| Some(r.gen_range(0..1000))).collect())),
            Column::new("color", ColumnData::String((0..n).map(|_| r.gen_bool(0.95).then(|| colors[r.gen_range(0..3)].to_string())).collect())),
            Column::new("label", ColumnData::Int64((0..n).map(|i| Some(if i < 2 { i as i64 } else { r.gen_range(0..2) })).collect())),
        ],
    )
    .unwrap()
}

#[test]
fn standardized_columns_have_zero_mean_unit_variance() {
    for seed in 0..10 {
        let t = mixed_table(seed, 500);
        let p = PreprocessorState::fit(&t, "label", ModelType::LogisticReg).unwrap();
        let x = p.transform(&t).unwrap().x;
        for f in &p.features {
            if let FeatureEncoding::Numeric { .. } = f.encoding {
                let c = x.column(f.offset);
                let n = c.len() as f64;
                let mean = c.iter().sum::<f64>() / n;
                let sd = (c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
                assert!(mean.abs() < 1e-9, "{}: mean {mean}", f.name);
                assert!((sd - 1.0).abs() < 1e-9, "{}: sd {sd}", f.name);
            }
        }
    }
}

#[test]
fn one_hot_spans_sum_to_one_and_unseen_goes_to_missing() {
    let t = mixed_table(3, 300);
    let p = PreprocessorState::fit(&t, "label", ModelType::LogisticReg).unwrap();
    let color = p.features.iter().find(|f| f.name == "color").unwrap();
    let FeatureEncoding::Categorical { vocabulary } = &color.encoding else { panic!("color should be categorical") };
    assert_eq!(vocabulary, &["blue", "green", "red"]);
    let x = p.transform_features(&t).unwrap();
    for r in 0..x.rows() {
        let s: f64 = x.row(r)[color.span()].iter().sum();
        assert_eq!(s, 1.0);
    }

    let unseen = Table::new(
        "u",
        vec![
            Column::new("x", ColumnData::Float64(vec![Some(1.0), None])),
            Column::new("k", ColumnData::Int64(vec![Some(3), Some(4)])),
            Column::new("color", ColumnData::String(vec![Some("purple".into()), None])),
        ],
    )
    .unwrap();
    let x = p.transform_features(&unseen).unwrap();
    let missing_slot = color.span().end - 1;
    for r in 0..2 {
        assert_eq!(x.get(r, missing_slot), 1.0);
        assert_eq!(x.row(r)[color.span()].iter().sum::<f64>(), 1.0);
    }
    // the NULL numeric is imputed to the training mean, i.e. 0 after scaling
    assert_eq!(x.get(1, p.features[0].offset), 0.0);
}

#[test]
fn split_properties_hold_for_random_inputs() {
    let mut r = rng(99);
    for _ in 0..500 {
        let n = r.gen_range(2..400);
        let f = r.gen_range(0.01..0.99);
        let seed = r.gen::<u64>();
        let n_eval = (n as f64 * f).floor() as usize;
        match split_indices(n, f, seed) {
            Ok((train, eval)) => {
                assert_eq!(eval.len(), n_eval);
                assert_eq!(train.len() + eval.len(), n);
                let mut all: BTreeSet<usize> = train.iter().copied().collect();
                assert!(eval.iter().all(|&i| all.insert(i)), "overlap");
                assert_eq!(all, (0..n).collect());
                assert_eq!(split_indices(n, f, seed).unwrap(), (train, eval));
            }
            Err(_) => assert!(n_eval == 0 || n_eval == n),
        }
    }
    let t = mixed_table(1, 70_692);
    let s = split_random(&t, 0.2, 42).unwrap();
    assert_eq!((s.eval_rows.row_count(), s.train_rows.row_count()), (14_138, 56_554));
    assert!(split_indices(10, 0.05, 1).is_err());
}

#[test]
fn no_split_evaluates_on_training_data_with_warning() {
    let mut e = Engine::new();
    e.catalog.register_table(mixed_table(4, 60), false).unwrap();
    let out = e
        .execute_sql("CREATE MODEL m OPTIONS(model_type='logistic_reg', data_split_method='NO_SPLIT') AS SELECT * FROM t")
        .unwrap();
    assert!(out.warnings.iter().any(|w| w.contains("NO_SPLIT")), "{:?}", out.warnings);
    let (report, warnings) = ml_evaluate(e.model("m").unwrap(), None).unwrap();
    assert_eq!(report.source, EvalSource::TrainingData);
    assert!(!warnings.is_empty());
    assert_eq!(report.counts.total(), 60);

    e.execute_sql("CREATE MODEL s OPTIONS(model_type='logistic_reg') AS SELECT * FROM t").unwrap();
    let (report, _) = ml_evaluate(e.model("s").unwrap(), None).unwrap();
    assert_eq!(report.source, EvalSource::StoredEvalSplit);
    assert_eq!(report.counts.total(), 12);
}
