//! Canonical text form of statements. Output always re-parses to the same AST.

use std::fmt::{self, Display, Formatter, Write};

use super::ast::*;
use super::lexer::is_keyword;
use super::options::{OptionLiteral, OptionsMap};

pub fn pretty_print(stmt: &Statement) -> String {
    stmt.to_string()
}

fn write_ident(f: &mut impl Write, name: &str) -> fmt::Result {
    let mut chars = name.chars();
    let plain = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !is_keyword(name);
    if plain {
        f.write_str(name)
    } else {
        write!(f, "`{}`", name.replace('`', "``"))
    }
}

fn write_string(f: &mut impl Write, s: &str) -> fmt::Result {
    write!(f, "'{}'", s.replace('\'', "''"))
}

pub(crate) fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

impl Display for QualifiedName {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_char('.')?;
            }
            write_ident(f, part)?;
        }
        Ok(())
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(v) => f.write_str(&format_number(*v)),
            Literal::String(s) => write_string(f, s),
            Literal::Null => f.write_str("NULL"),
        }
    }
}

/// Writes `e`, wrapped in parentheses when it binds looser than `min_prec`.
fn write_operand(f: &mut Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Column(name) => write_ident(f, name),
            Expr::Literal(lit) => write!(f, "{lit}"),
            Expr::Star => f.write_str("*"),
            Expr::Unary {
                op: UnaryOp::Neg,
                expr,
            } => write!(f, "-({expr})"),
            Expr::Unary {
                op: UnaryOp::Not,
                expr,
            } => {
                f.write_str("NOT ")?;
                write_operand(f, expr, 3)
            }
            Expr::Binary { op, left, right } => {
                let p = op.precedence();
                write_operand(f, left, p)?;
                write!(f, " {} ", op.symbol())?;
                // left-associative: equal precedence on the right needs parens
                write_operand(f, right, p + 1)
            }
            Expr::IsNull { expr, negated } => {
                write_operand(f, expr, 4)?;
                f.write_str(if *negated { " IS NOT NULL" } else { " IS NULL" })
            }
            Expr::Case {
                branches,
                else_result,
            } => {
                f.write_str("CASE")?;
                for (cond, result) in branches {
                    write!(f, " WHEN {cond} THEN {result}")?;
                }
                if let Some(e) = else_result {
                    write!(f, " ELSE {e}")?;
                }
                f.write_str(" END")
            }
            Expr::Coalesce(args) => {
                f.write_str("COALESCE(")?;
                write_list(f, args)?;
                f.write_char(')')
            }
            Expr::Aggregate { func, args } => {
                write!(f, "{}(", func.name())?;
                write_list(f, args)?;
                f.write_char(')')
            }
        }
    }
}

fn write_list<T: Display>(f: &mut Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl Display for Projection {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)?;
        if let Some(alias) = &self.alias {
            f.write_str(" AS ")?;
            write_ident(f, alias)?;
        }
        Ok(())
    }
}

impl Display for SelectStmt {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        write_list(f, &self.projections)?;
        write!(f, " FROM {}", self.from)?;
        if let Some(filter) = &self.filter {
            write!(f, " WHERE {filter}")?;
        }
        Ok(())
    }
}

impl Display for OptionLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            OptionLiteral::Number(v) => f.write_str(&format_number(*v)),
            OptionLiteral::String(s) => write_string(f, s),
            OptionLiteral::List(items) => {
                f.write_char('[')?;
                write_list(f, items)?;
                f.write_char(']')
            }
        }
    }
}

impl Display for OptionsMap {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("OPTIONS(")?;
        for (i, opt) in self.iter().enumerate() {
            f.write_str(if i == 0 { "\n  " } else { ",\n  " })?;
            write!(f, "{} = {}", opt.key(), opt.to_literal())?;
        }
        f.write_str("\n)")
    }
}

impl Display for Statement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Select(s) => write!(f, "{s}"),
            Statement::CreateModel(c) => {
                f.write_str("CREATE ")?;
                if c.replace {
                    f.write_str("OR REPLACE ")?;
                }
                write!(f, "MODEL {}\n{} AS\n{}", c.name, c.options, c.query)
            }
            Statement::CreateTableFromCsv(c) => {
                f.write_str("CREATE ")?;
                if c.replace {
                    f.write_str("OR REPLACE ")?;
                }
                write!(f, "TABLE {} FROM CSV ", c.name)?;
                write_string(f, &c.path)
            }
            Statement::MlEvaluate(e) => {
                write!(f, "SELECT * FROM ML.EVALUATE(MODEL {}", e.model)?;
                if let Some(input) = &e.input {
                    write!(f, ", ({input})")?;
                }
                f.write_char(')')
            }
            Statement::MlPredict(p) => {
                write!(f, "SELECT * FROM ML.PREDICT(MODEL {}, ({})", p.model, p.input)?;
                if p.threshold != DEFAULT_THRESHOLD {
                    write!(f, ", STRUCT({} AS threshold)", format_number(p.threshold))?;
                }
                f.write_char(')')
            }
            Statement::MlFeatureImportance { model } => {
                write!(f, "SELECT * FROM ML.FEATURE_IMPORTANCE(MODEL {model})")
            }
            Statement::MlRocCurve { model } => {
                write!(f, "SELECT * FROM ML.ROC_CURVE(MODEL {model})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_select() {
        let s = Statement::Select(SelectStmt::star("t"));
        assert_eq!(pretty_print(&s), "SELECT * FROM t");
    }

    #[test]
    fn quoting_rules() {
        let mut s = String::new();
        write_ident(&mut s, "select").unwrap();
        write_ident(&mut s, "ok_1").unwrap();
        write_ident(&mut s, "has space").unwrap();
        assert_eq!(s, "`select`ok_1`has space`");
    }

    #[test]
    fn parenthesization() {
        let e = Expr::binary(
            BinaryOp::Multiply,
            Expr::binary(BinaryOp::Plus, Expr::column("a"), Expr::column("b")),
            Expr::column("c"),
        );
        assert_eq!(e.to_string(), "(a + b) * c");
        let e = Expr::binary(
            BinaryOp::Minus,
            Expr::column("a"),
            Expr::binary(BinaryOp::Minus, Expr::column("b"), Expr::column("c")),
        );
        assert_eq!(e.to_string(), "a - (b - c)");
    }

    #[test]
    fn numbers() {
        assert_eq!(format_number(150.0), "150");
        assert_eq!(format_number(0.00001), "1e-5");
        assert_eq!(format_number(0.05), "0.05");
    }
}
