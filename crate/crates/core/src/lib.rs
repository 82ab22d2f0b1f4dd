//! An embedded analytics engine with a SQL dialect for in-database machine
//! learning: CSV ingestion, single-table queries, `CREATE MODEL` training of
//! binary classifiers, and `ML.*` functions for evaluation, prediction,
//! feature importance and ROC sweeps.

pub mod cli;
pub mod engine;
pub mod error;
pub mod eval;
pub mod exec;
pub mod matrix;
pub mod preprocess;
pub mod sql;
pub mod storage;
pub mod synth;
pub mod train;

pub use engine::{Engine, Outcome, Output};
pub use error::{Error, Position, Result, SqlError};
