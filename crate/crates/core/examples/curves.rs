//! Threshold sweep, ROC and precision-recall curves for a trained model,
//! plus the curve CSV that plotting tools can consume.

use minibqml::eval::{curve_table, pr_auc, roc_auc, roc_curve_points, trapezoid_auc, CurvePoint};
use minibqml::storage::write_csv;
use minibqml::synth::brfss_like;
use minibqml::Engine;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut engine = Engine::new();
    engine.catalog.register_table(brfss_like(5_000, 3), false)?;
    engine.execute_sql(
        "CREATE MODEL m OPTIONS(model_type = 'boosted_tree_classifier', \
         input_label_cols = ['Diabetes_binary'], max_iterations = 40) \
         AS SELECT * FROM diabetes_data",
    )?;

    let points = roc_curve_points(engine.model("m")?)?;
    println!("{} distinct thresholds on the eval split", points.len());
    for p in points.iter().step_by(points.len().div_ceil(8)) {
        println!(
            "threshold {:.3}  recall {:.3}  fpr {:.3}  precision {:.3}",
            p.threshold,
            p.recall,
            p.false_positive_rate,
            p.precision.unwrap_or(f64::NAN)
        );
    }

    // the area under the emitted points (plus the origin) is the report's AUC
    let origin = CurvePoint { threshold: f64::INFINITY, recall: 0.0, false_positive_rate: 0.0, precision: None };
    let from_points = trapezoid_auc(&[&[origin][..], &points].concat());
    let model = engine.model("m")?;
    let (labels, scores): (Vec<bool>, Vec<f64>) = {
        let rows = &model.eval_rows;
        let y = rows.column("Diabetes_binary").unwrap();
        let labels = (0..rows.row_count()).map(|r| y.data.get_f64(r) == Some(1.0)).collect();
        (labels, model.predict_proba(rows)?)
    };
    println!("roc_auc {:.6} (from points {:.6}), pr_auc {:.6}", roc_auc(&labels, &scores)?, from_points, pr_auc(&labels, &scores)?);

    let path = std::env::temp_dir().join("minibqml_curves.csv");
    write_csv(&curve_table(&points), std::fs::File::create(&path)?)?;
    println!("curve CSV written to {}", path.display());
    Ok(())
}
