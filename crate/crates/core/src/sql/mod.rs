//! SQL frontend: tokenizer, parser, and canonical printer for the dialect.
//!
//! The dialect is a single-table `SELECT` subset plus the model statements:
//! `CREATE [OR REPLACE] MODEL ... OPTIONS(...) AS SELECT ...`,
//! `CREATE [OR REPLACE] TABLE t FROM CSV 'path'`, and the `ML.EVALUATE`,
//! `ML.PREDICT`, `ML.FEATURE_IMPORTANCE` and `ML.ROC_CURVE` functions, usable
//! either as `SELECT * FROM ML.<fn>(...)` or as bare statements.

pub mod ast;
pub mod lexer;
pub mod options;
pub mod parser;
pub mod printer;

pub use ast::*;
pub use lexer::{tokenize, Token, TokenKind};
pub use options::{ModelOption, ModelType, OptionLiteral, OptionsMap, SplitMethod, MAX_TREE_DEPTH, OPTION_KEYS};
pub use parser::{parse_expr, parse_statement};
pub use printer::pretty_print;
