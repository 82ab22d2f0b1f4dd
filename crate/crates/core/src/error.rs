use std::fmt;

use thiserror::Error;

/// 1-based position inside a piece of SQL text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

/// Errors raised by the SQL frontend.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SqlError {
    #[error("lex error at {position}: {message}")]
    Lex { position: Position, message: String },
    #[error("parse error at {position}: expected {}, found {found}", .expected.join(" or "))]
    Parse {
        position: Position,
        expected: Vec<String>,
        found: String,
    },
    #[error("option error at {position}: {message}")]
    Option {
        position: Position,
        key: String,
        message: String,
    },
}

impl SqlError {
    pub fn position(&self) -> Position {
        match self {
            SqlError::Lex { position, .. }
            | SqlError::Parse { position, .. }
            | SqlError::Option { position, .. } => *position,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Sql(#[from] SqlError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error at row {row}: {message}")]
    Csv { row: u64, message: String },
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("name error: {0}")]
    Name(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("cannot mix aggregate and non-aggregate expressions: {0}")]
    Mix(String),
    #[error("label error: {0}")]
    Label(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("split error: {0}")]
    Split(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("length mismatch: {0}")]
    Length(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unsupported model type: {0}")]
    ModelType(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
