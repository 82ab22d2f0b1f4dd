//! Ranks the survey indicators by total split gain in a boosted tree.
//! One-hot columns are credited back to the source column they encode.

use minibqml::cli::render_table;
use minibqml::synth::brfss_like;
use minibqml::{Engine, Output};

fn main() -> Result<(), minibqml::Error> {
    let mut engine = Engine::new();
    engine.catalog.register_table(brfss_like(10_000, 5), false)?;
    engine.execute_sql(
        "CREATE MODEL diabetes_model OPTIONS(model_type = 'boosted_tree_classifier', \
         input_label_cols = ['Diabetes_binary'], max_iterations = 60, learn_rate = 0.1, \
         l1_reg = 0.1, l2_reg = 2.0) AS SELECT * FROM diabetes_data",
    )?;
    if let Output::Table(t) = engine.execute_sql("SELECT * FROM ML.FEATURE_IMPORTANCE(MODEL diabetes_model)")?.output {
        render_table(&t, &mut std::io::stdout())?;
    }

    // only tree ensembles carry split gains
    engine.execute_sql(
        "CREATE MODEL linear OPTIONS(model_type = 'logistic_reg', input_label_cols = ['Diabetes_binary']) \
         AS SELECT * FROM diabetes_data",
    )?;
    let err = engine.execute_sql("ML.FEATURE_IMPORTANCE(MODEL linear)").unwrap_err();
    println!("\n{err}");
    Ok(())
}
