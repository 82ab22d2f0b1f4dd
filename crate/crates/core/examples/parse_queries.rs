//! Parses the case-study queries and prints their canonical form.
//! Printing and re-parsing gives back the same statement.

use minibqml::sql::{parse_statement, pretty_print};

const QUERIES: [(&str, &str); 4] = [
    ("mean/constant imputation", "SELECT *,\n    COALESCE(age, 50) AS age_imputed\nFROM diabetes_data;"),
    (
        "one-hot encoding",
        "SELECT *,\n    CASE WHEN gender = 'Male' THEN 1 ELSE 0 END AS gender_male,\n    \
         CASE WHEN gender = 'Female' THEN 1 ELSE 0 END AS gender_female\nFROM diabetes_data;",
    ),
    (
        "correlation with the target",
        "SELECT CORR(feature_value, diabetes_binary) AS correlation\nFROM diabetes_data;",
    ),
    (
        "boosted tree training",
        "CREATE OR REPLACE MODEL `project_id.dataset_id.diabetes_model`
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
  Diabetes_binary IS NOT NULL;",
    ),
];

fn main() -> Result<(), minibqml::Error> {
    for (title, sql) in QUERIES {
        let stmt = parse_statement(sql)?;
        let printed = pretty_print(&stmt);
        assert_eq!(parse_statement(&printed)?, stmt);
        println!("-- {title}\n{printed};\n");
    }

    // errors carry a line and column
    let err = parse_statement("SELECT a,\nFROM t").unwrap_err();
    println!("-- a syntax error\n{err}");
    Ok(())
}
