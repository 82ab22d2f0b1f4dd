//! Saves a model to disk, reloads it in a fresh session, and checks that
//! predictions are bit-identical.

use minibqml::storage::{load_model, save_model};
use minibqml::synth::brfss_like;
use minibqml::{Engine, Output};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let table = brfss_like(3_000, 9);
    let holdout = table.take_rows(&(0..100).collect::<Vec<_>>());

    // a session with a model directory saves every trained model there
    let mut engine = Engine::new().with_model_dir(dir.path());
    engine.catalog.register_table(table, false)?;
    engine.execute_sql(
        "CREATE MODEL dnn OPTIONS(model_type = 'dnn_classifier', input_label_cols = ['Diabetes_binary'], \
         hidden_units = [16, 8], max_iterations = 10) AS SELECT * FROM diabetes_data",
    )?;
    let before = engine.model("dnn")?.predict_proba(&holdout)?;

    // a new session finds the model by name in the same directory
    let mut fresh = Engine::new().with_model_dir(dir.path());
    fresh.catalog.register_table(holdout.clone().renamed("holdout"), false)?;
    let Output::Table(pred) = fresh.execute_sql("ML.PREDICT(MODEL dnn, TABLE holdout)")?.output else {
        unreachable!()
    };
    let col = pred.column("predicted_Diabetes_binary_prob").unwrap();
    let after: Vec<f64> = (0..pred.row_count()).map(|r| col.data.get_f64(r).unwrap()).collect();
    assert!(before.iter().zip(&after).all(|(a, b)| a.to_bits() == b.to_bits()));
    println!("100 predictions identical after reload, e.g. {:.6}", after[0]);

    // explicit save/load works the same way
    let path = dir.path().join("copy.mbqml.json");
    save_model(engine.model("dnn")?, &path)?;
    let copy = load_model(&path)?;
    println!("{} bytes on disk, {} training-log entries", std::fs::metadata(&path)?.len(), copy.training_log.len());
    Ok(())
}
