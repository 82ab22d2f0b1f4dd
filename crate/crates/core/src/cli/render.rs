//! Table, CSV and JSON writers for statement results.

use std::io::Write;

use serde_json::{json, Value as Json};

use crate::engine::Output;
use crate::error::Result;
use crate::storage::{write_csv, Table, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

pub fn render_table(table: &Table, out: &mut dyn Write) -> Result<()> {
    let names = table.column_names();
    let cells: Vec<Vec<String>> = (0..table.row_count())
        .map(|r| table.row(r).iter().map(Value::to_string).collect())
        .collect();
    let widths: Vec<usize> = names
        .iter()
        .enumerate()
        .map(|(c, n)| {
            cells
                .iter()
                .map(|row| row[c].chars().count())
                .chain([n.chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |vals: &mut dyn Iterator<Item = &str>| -> String {
        let parts: Vec<String> = vals
            .zip(&widths)
            .map(|(v, w)| format!("{v:<w$}"))
            .collect();
        parts.join(" | ").trim_end().to_string()
    };
    writeln!(out, "{}", line(&mut names.iter().copied()))?;
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    writeln!(out, "{}", rule.join("-+-"))?;
    for row in &cells {
        writeln!(out, "{}", line(&mut row.iter().map(String::as_str)))?;
    }
    let n = table.row_count();
    writeln!(out, "({n} row{})", if n == 1 { "" } else { "s" })?;
    Ok(())
}

fn json_value(v: Value) -> Json {
    match v {
        Value::Int(i) => json!(i),
        Value::Float(f) => serde_json::Number::from_f64(f).map_or(Json::Null, Json::Number),
        Value::Str(s) => Json::String(s),
        Value::Null => Json::Null,
    }
}

/// `{"columns": [...], "rows": [[...], ...]}`, keeping column order.
pub fn table_json(table: &Table) -> Json {
    let rows: Vec<Json> = (0..table.row_count())
        .map(|r| Json::Array(table.row(r).into_iter().map(json_value).collect()))
        .collect();
    json!({ "columns": table.column_names(), "rows": rows })
}

/// Writes one result. In CSV and JSON modes messages go to `diag` so that
/// `out` holds only data.
pub fn render(output: &Output, format: OutputFormat, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    match (output, format) {
        (Output::Message(m), OutputFormat::Table) => writeln!(out, "{m}")?,
        (Output::Message(m), _) => writeln!(diag, "{m}")?,
        (Output::Table(t), OutputFormat::Table) => render_table(t, out)?,
        (Output::Report(r), OutputFormat::Table) => render_table(&r.to_table(), out)?,
        (Output::Table(t), OutputFormat::Csv) => write_csv(t, &mut *out)?,
        (Output::Report(r), OutputFormat::Csv) => write_csv(&r.to_table(), &mut *out)?,
        (Output::Table(t), OutputFormat::Json) => writeln!(out, "{}", table_json(t))?,
        (Output::Report(r), OutputFormat::Json) => {
            let text = serde_json::to_string(r).map_err(|e| crate::Error::Format(e.to_string()))?;
            writeln!(out, "{text}")?
        }
    }
    Ok(())
}
