//! Trains the three classifiers on the same synthetic survey table and
//! prints their evaluation metrics side by side.

use minibqml::synth::brfss_like;
use minibqml::{Engine, Output};

const MODELS: [(&str, &str); 3] = [
    ("logistic_reg", "l1_reg = 0.001, max_iterations = 200, learn_rate = 0.5"),
    (
        "boosted_tree_classifier",
        "max_iterations = 150, learn_rate = 0.05, min_rel_progress = 0.00001, l1_reg = 0.1, l2_reg = 2.0",
    ),
    ("dnn_classifier", "hidden_units = [32, 16], max_iterations = 20"),
];

fn main() -> Result<(), minibqml::Error> {
    let mut engine = Engine::new();
    engine.catalog.register_table(brfss_like(20_000, 11), false)?;

    println!("{:<24} {:>9} {:>9} {:>9} {:>9} {:>9}", "model", "accuracy", "f1", "log_loss", "roc_auc", "pr_auc");
    for (model_type, options) in MODELS {
        let sql = format!(
            "CREATE OR REPLACE MODEL m_{model_type} OPTIONS(model_type = '{model_type}', \
             input_label_cols = ['Diabetes_binary'], {options}) AS \
             SELECT * FROM diabetes_data WHERE Diabetes_binary IS NOT NULL"
        );
        let outcome = engine.execute_sql(&sql)?;
        for w in outcome.warnings {
            eprintln!("warning: {w}");
        }
        let Output::Report(r) = engine.execute_sql(&format!("ML.EVALUATE(MODEL m_{model_type})"))?.output else {
            unreachable!("ML.EVALUATE returns a report")
        };
        let f = |v: Option<f64>| v.map_or("NULL".to_string(), |v| format!("{v:.4}"));
        println!(
            "{model_type:<24} {:>9.4} {:>9} {:>9.4} {:>9} {:>9}",
            r.accuracy,
            f(r.f1_score),
            r.log_loss,
            f(r.roc_auc),
            f(r.pr_auc)
        );
    }
    Ok(())
}
