//! Synthetic data shaped like the BRFSS 2015 diabetes health-indicator
//! extract: 21 indicator columns plus a balanced `Diabetes_binary` label,
//! all stored as FLOAT64 the way the public CSV stores them.
//!
//! Each feature is drawn conditionally on the label with class-specific
//! rates close to the public 50/50 extract's marginals. The generator exists
//! so the full pipeline can be exercised without the real file; metrics on
//! it say nothing about the real data.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal, WeightedIndex};

use crate::storage::{Column, ColumnData, Table};

pub const BRFSS_ROWS: usize = 70_692;
pub const LABEL_COLUMN: &str = "Diabetes_binary";

/// Column order of the public CSV.
pub const BRFSS_COLUMNS: [&str; 22] = [
    "Diabetes_binary",
    "HighBP",
    "HighChol",
    "CholCheck",
    "BMI",
    "Smoker",
    "Stroke",
    "HeartDiseaseorAttack",
    "PhysActivity",
    "Fruits",
    "Veggies",
    "HvyAlcoholConsump",
    "AnyHealthcare",
    "NoDocbcCost",
    "GenHlth",
    "MentHlth",
    "PhysHlth",
    "DiffWalk",
    "Sex",
    "Age",
    "Education",
    "Income",
];

/// (column, P(1 | diabetic), P(1 | not diabetic))
const BINARY_RATES: [(&str, f64, f64); 14] = [
    ("HighBP", 0.753, 0.377),
    ("HighChol", 0.670, 0.382),
    ("CholCheck", 0.993, 0.958),
    ("Smoker", 0.518, 0.432),
    ("Stroke", 0.092, 0.032),
    ("HeartDiseaseorAttack", 0.223, 0.073),
    ("PhysActivity", 0.631, 0.776),
    ("Fruits", 0.585, 0.618),
    ("Veggies", 0.756, 0.814),
    ("HvyAlcoholConsump", 0.024, 0.062),
    ("AnyHealthcare", 0.961, 0.940),
    ("NoDocbcCost", 0.106, 0.084),
    ("DiffWalk", 0.371, 0.134),
    ("Sex", 0.479, 0.436),
];

struct ClassModel {
    bmi: Normal<f64>,
    genhlth: WeightedIndex<f64>,
    /// P(0 days) for MentHlth and PhysHlth
    ment_zero: f64,
    phys_zero: f64,
    /// 1 + Binomial(n, p) for the ordinal scales
    age: Binomial,
    education: Binomial,
    income: Binomial,
}

impl ClassModel {
    fn new(diabetic: bool) -> Self {
        let pick = |a: f64, b: f64| if diabetic { a } else { b };
        ClassModel {
            bmi: Normal::new(pick(31.9, 27.8), pick(7.4, 6.3)).expect("valid normal"),
            genhlth: WeightedIndex::new(if diabetic {
                [0.03, 0.13, 0.36, 0.31, 0.17]
            } else {
                [0.17, 0.36, 0.31, 0.12, 0.04]
            })
            .expect("valid weights"),
            ment_zero: pick(0.65, 0.71),
            phys_zero: pick(0.50, 0.65),
            age: Binomial::new(12, pick(0.70, 0.57)).expect("valid binomial"),
            education: Binomial::new(5, pick(0.75, 0.814)).expect("valid binomial"),
            income: Binomial::new(7, pick(0.60, 0.743)).expect("valid binomial"),
        }
    }
}

fn days(rng: &mut ChaCha8Rng, p_zero: f64) -> f64 {
    if rng.gen_bool(p_zero) {
        0.0
    } else {
        rng.gen_range(1..=30) as f64
    }
}

/// `n` rows with exactly `n / 2` diabetic respondents (rounded down), in a
/// seeded random order.
pub fn brfss_like(n: usize, seed: u64) -> Table {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<bool> = (0..n).map(|i| i < n / 2).collect();
    labels.shuffle(&mut rng);
    let models = [ClassModel::new(false), ClassModel::new(true)];

    let mut cols: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(n); BRFSS_COLUMNS.len()];
    let index = |name: &str| BRFSS_COLUMNS.iter().position(|c| *c == name).expect("known column");
    let binary: Vec<(usize, f64, f64)> = BINARY_RATES
        .iter()
        .map(|&(c, p1, p0)| (index(c), p1, p0))
        .collect();
    let (bmi, gen, ment, phys) = (index("BMI"), index("GenHlth"), index("MentHlth"), index("PhysHlth"));
    let (age, edu, inc) = (index("Age"), index("Education"), index("Income"));

    for &y in &labels {
        let m = &models[y as usize];
        let mut row = vec![0.0; BRFSS_COLUMNS.len()];
        row[0] = y as u8 as f64;
        for &(c, p1, p0) in &binary {
            row[c] = rng.gen_bool(if y { p1 } else { p0 }) as u8 as f64;
        }
        row[bmi] = m.bmi.sample(&mut rng).round().clamp(12.0, 98.0);
        row[gen] = (m.genhlth.sample(&mut rng) + 1) as f64;
        row[ment] = days(&mut rng, m.ment_zero);
        row[phys] = days(&mut rng, m.phys_zero);
        row[age] = (m.age.sample(&mut rng) + 1) as f64;
        row[edu] = (m.education.sample(&mut rng) + 1) as f64;
        row[inc] = (m.income.sample(&mut rng) + 1) as f64;
        for (col, v) in cols.iter_mut().zip(row) {
            col.push(Some(v));
        }
    }

    let columns = BRFSS_COLUMNS
        .iter()
        .zip(cols)
        .map(|(name, values)| Column::new(*name, ColumnData::Float64(values)))
        .collect();
    Table::new("diabetes_data", columns).expect("generated schema is valid")
}
