//! The full case study as one script: load the survey CSV, screen features
//! with CORR, train the boosted tree with the published options, evaluate,
//! predict, and rank features.
//!
//!     cargo run --release --example diabetes_case_study -- [path/to/brfss.csv]
//!
//! Without a path, a synthetic table of the same shape is generated.

use minibqml::cli::{run_source, OutputFormat};
use minibqml::storage::write_csv;
use minibqml::synth::{brfss_like, BRFSS_ROWS};
use minibqml::Engine;

const SCRIPT: &str = "
CREATE OR REPLACE TABLE diabetes_data FROM CSV '{csv}';

SELECT COUNT(*) AS respondents, AVG(Diabetes_binary) AS prevalence,
       CORR(HighBP, Diabetes_binary) AS highbp_corr,
       CORR(GenHlth, Diabetes_binary) AS genhlth_corr,
       CORR(BMI, Diabetes_binary) AS bmi_corr
FROM diabetes_data;

CREATE OR REPLACE MODEL `project_id.dataset_id.diabetes_model`
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
  Diabetes_binary IS NOT NULL;

SELECT * FROM ML.EVALUATE(MODEL `project_id.dataset_id.diabetes_model`);

SELECT * FROM ML.FEATURE_IMPORTANCE(MODEL diabetes_model);
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let _tmp;
    let csv = match std::env::args().nth(1) {
        Some(path) => path,
        None => {
            _tmp = tempfile::tempdir()?;
            let path = _tmp.path().join("diabetes.csv");
            write_csv(&brfss_like(BRFSS_ROWS, 2015), std::fs::File::create(&path)?)?;
            eprintln!("no CSV given; using a synthetic table of {BRFSS_ROWS} rows");
            path.display().to_string()
        }
    };
    let script = SCRIPT.replace("{csv}", &csv);
    let code = run_source(
        &mut Engine::new(),
        &script,
        OutputFormat::Table,
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
