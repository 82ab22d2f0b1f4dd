//! Script runner and interactive REPL.

pub mod render;
pub mod split;

use std::fs::File;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use crate::engine::{Engine, DEFAULT_SEED};
use crate::error::Error;
use crate::eval::{curve_table, roc_curve_points};
use crate::storage::write_csv;

pub use render::{render, render_table, table_json, OutputFormat};
pub use split::{split_script, split_terminated, ScriptStatement};

/// Exit code for a failed statement.
pub const EXIT_STATEMENT_ERROR: i32 = 1;
/// Exit code for an unreadable script.
pub const EXIT_IO_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionConfig {
    /// Seed for models whose OPTIONS carry no `seed`.
    pub seed: u64,
    pub output_format: OutputFormat,
    /// Trained models are saved here and looked up here.
    pub model_dir: Option<PathBuf>,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            seed: DEFAULT_SEED,
            output_format: OutputFormat::Table,
            model_dir: None,
        }
    }
}

impl SessionConfig {
    pub fn engine(&self) -> Engine {
        let engine = Engine::new().with_seed(self.seed);
        match &self.model_dir {
            Some(dir) => engine.with_model_dir(dir),
            None => engine,
        }
    }
}

/// Human-readable diagnostic for a failed statement.
pub fn diagnostic(index: usize, stmt: &ScriptStatement, err: &Error) -> String {
    let at = match err {
        Error::Sql(e) => stmt.absolute(e.position()),
        _ => stmt.first_token(),
    };
    format!("error: statement {index} ({at}): {err}")
}

/// Executes one statement and renders its result; returns false on error.
fn run_statement(
    engine: &mut Engine,
    index: usize,
    stmt: &ScriptStatement,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> bool {
    let result = engine
        .execute_sql(&stmt.text)
        .and_then(|outcome| {
            for w in &outcome.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            render(&outcome.output, format, out, err)
        });
    match result {
        Ok(()) => true,
        Err(e) => {
            let _ = writeln!(err, "{}", diagnostic(index, stmt, &e));
            false
        }
    }
}

/// Runs every statement in `script` in order, stopping at the first error.
/// Returns the process exit code.
pub fn run_source(engine: &mut Engine, script: &str, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    for (i, stmt) in split_script(script).iter().enumerate() {
        if !run_statement(engine, i + 1, stmt, format, out, err) {
            return EXIT_STATEMENT_ERROR;
        }
    }
    0
}

pub fn run_script(path: &Path, config: &SessionConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let script = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read script '{}': {e}", path.display());
            return EXIT_IO_ERROR;
        }
    };
    run_source(&mut config.engine(), &script, config.output_format, out, err)
}

fn export_curves(engine: &mut Engine, model: &str, path: &str) -> crate::Result<String> {
    let points = roc_curve_points(engine.model(model)?)?;
    write_csv(&curve_table(&points), File::create(path)?)?;
    Ok(format!("wrote {} curve points to {path}", points.len()))
}

/// Handles a `\` meta-command. Returns `None` for `\quit`.
fn meta_command(engine: &mut Engine, line: &str, out: &mut dyn Write) -> Option<crate::Result<()>> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let result = match words.as_slice() {
        ["\\quit" | "\\q"] => return None,
        ["\\load", path, kw, name] if kw.eq_ignore_ascii_case("as") => engine
            .catalog
            .load_csv(path, name, true)
            .and_then(|t| Ok(writeln!(out, "loaded {} rows into table '{name}'", t.row_count())?)),
        ["\\tables"] => engine
            .catalog
            .tables()
            .try_for_each(|t| writeln!(out, "{} ({} rows)", t.name, t.row_count()))
            .map_err(Error::from),
        ["\\models"] => engine
            .catalog
            .models()
            .try_for_each(|m| writeln!(out, "{} ({})", m.name, m.model_type))
            .map_err(Error::from),
        ["\\save", model, path] => engine
            .model(model)
            .map(|_| ())
            .and_then(|_| engine.save_model(model, path))
            .and_then(|_| Ok(writeln!(out, "saved model '{model}' to {path}")?)),
        ["\\export", model, kind, path] if kind.eq_ignore_ascii_case("curves") => {
            export_curves(engine, model, path).and_then(|m| Ok(writeln!(out, "{m}")?))
        }
        _ => Err(Error::Name(format!(
            "unknown meta-command '{line}' (try \\load, \\tables, \\models, \\save, \\export, \\quit)"
        ))),
    };
    Some(result)
}

/// Interactive loop over `input`. Statement errors are reported and the
/// loop continues; it ends at `\quit` or end of input.
pub fn repl(
    config: &SessionConfig,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
    prompt: bool,
) -> i32 {
    let mut engine = config.engine();
    let mut buffer = String::new();
    let mut index = 0;
    loop {
        if prompt {
            let _ = write!(err, "{}", if buffer.trim().is_empty() { "minibqml> " } else { "      ... " });
            let _ = err.flush();
        }
        let mut line = String::new();
        match input.read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_IO_ERROR;
            }
        }
        if buffer.trim().is_empty() && line.trim_start().starts_with('\\') {
            buffer.clear();
            match meta_command(&mut engine, line.trim(), out) {
                None => return 0,
                Some(Err(e)) => {
                    let _ = writeln!(err, "error: {e}");
                }
                Some(Ok(())) => {}
            }
            continue;
        }
        buffer.push_str(&line);
        let (stmts, rest) = split_terminated(&buffer);
        for stmt in stmts.iter().filter(|s| !s.is_blank()) {
            index += 1;
            run_statement(&mut engine, index, stmt, config.output_format, out, err);
        }
        buffer = buffer[rest..].to_string();
    }
    let tail = ScriptStatement {
        text: std::mem::take(&mut buffer),
        start: crate::Position::new(1, 1),
    };
    if !tail.is_blank() {
        run_statement(&mut engine, index + 1, &tail, config.output_format, out, err);
    }
    0
}
