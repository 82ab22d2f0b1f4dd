//! Tables, CSV ingestion, the catalog, and model persistence.

pub mod artifact;
pub mod catalog;
pub mod csv_io;
pub mod table;

pub use artifact::{load_model, save_model, EvalSource, ModelArtifact, MODEL_FILE_EXTENSION, SCHEMA_VERSION};
pub use catalog::Catalog;
pub use csv_io::{load_csv_file, read_csv, write_csv};
pub use table::{Column, ColumnData, ColumnType, Table, Value};
