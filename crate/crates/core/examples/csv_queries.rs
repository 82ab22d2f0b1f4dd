//! Loads a CSV and runs the manual preprocessing queries: constant
//! imputation, one-hot encoding with CASE, and CORR for feature screening.

use minibqml::cli::render_table;
use minibqml::{Engine, Output};

const CSV: &str = "\
age,gender,bmi,diabetes_binary
34,Male,24.1,0
,Female,31.5,1
61,Female,29.0,1
45,Male,,0
52,Male,33.2,1
29,Female,22.8,0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("survey.csv");
    std::fs::write(&path, CSV)?;

    let mut engine = Engine::new();
    let queries = [
        format!("CREATE TABLE diabetes_data FROM CSV '{}'", path.display()),
        "SELECT *, COALESCE(age, 50) AS age_imputed FROM diabetes_data".into(),
        "SELECT gender, CASE WHEN gender = 'Male' THEN 1 ELSE 0 END AS gender_male, \
         CASE WHEN gender = 'Female' THEN 1 ELSE 0 END AS gender_female FROM diabetes_data"
            .into(),
        "SELECT CORR(bmi, diabetes_binary) AS bmi_corr, CORR(age, diabetes_binary) AS age_corr, \
         COUNT(*) AS n, AVG(bmi) AS mean_bmi FROM diabetes_data"
            .into(),
        "SELECT age, bmi / 10 AS bmi_tens FROM diabetes_data WHERE age > 40 AND bmi IS NOT NULL"
            .into(),
    ];
    let stdout = &mut std::io::stdout();
    for sql in &queries {
        println!("> {sql}");
        match engine.execute_sql(sql)?.output {
            Output::Table(t) => render_table(&t, stdout)?,
            Output::Message(m) => println!("{m}"),
            Output::Report(r) => render_table(&r.to_table(), stdout)?,
        }
        println!();
    }
    Ok(())
}
