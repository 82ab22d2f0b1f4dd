//! Evaluation of single-table `SELECT` statements.
//!
//! Expressions are type-checked against the source schema before any row is
//! touched. NULL propagates through arithmetic and comparisons, predicates use
//! three-valued logic, and a NULL predicate drops the row. Comparisons and
//! logical operators produce INT64 0/1. Integer division and division by zero
//! follow SQL conventions: `/` always yields FLOAT64, and `x / 0` is NULL.

use crate::error::{Error, Result};
use crate::sql::{AggregateFunc, BinaryOp, Expr, Literal, SelectStmt, UnaryOp};
use crate::storage::{Catalog, Column, ColumnData, ColumnType, Table, Value};

/// Static type of an expression. `Null` is the type of a bare NULL literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SqlType {
    Int,
    Float,
    Str,
    Null,
}

impl SqlType {
    fn from_column(t: ColumnType) -> Self {
        match t {
            ColumnType::Int64 => SqlType::Int,
            ColumnType::Float64 => SqlType::Float,
            ColumnType::String => SqlType::Str,
        }
    }

    fn column_type(self) -> ColumnType {
        match self {
            SqlType::Int => ColumnType::Int64,
            SqlType::Float => ColumnType::Float64,
            // an all-NULL expression has no better type
            SqlType::Str | SqlType::Null => ColumnType::String,
        }
    }

    fn is_numeric_or_null(self) -> bool {
        matches!(self, SqlType::Int | SqlType::Float | SqlType::Null)
    }
}

fn unify(a: SqlType, b: SqlType, what: &str) -> Result<SqlType> {
    use SqlType::*;
    Ok(match (a, b) {
        (Null, t) | (t, Null) => t,
        (Int, Int) => Int,
        (Int | Float, Int | Float) => Float,
        (Str, Str) => Str,
        _ => {
            return Err(Error::Type(format!(
                "{what} mixes STRING and numeric values"
            )))
        }
    })
}

fn literal_value(lit: &Literal) -> Value {
    match lit {
        Literal::Number(v) if v.fract() == 0.0 && v.abs() < 9.007_199_254_740_992e15 => {
            Value::Int(*v as i64)
        }
        Literal::Number(v) => Value::Float(*v),
        Literal::String(s) => Value::Str(s.clone()),
        Literal::Null => Value::Null,
    }
}

fn require_numeric(t: SqlType, context: &str) -> Result<()> {
    if t.is_numeric_or_null() {
        Ok(())
    } else {
        Err(Error::Type(format!("{context} requires a numeric operand")))
    }
}

fn type_of(expr: &Expr, table: &Table) -> Result<SqlType> {
    Ok(match expr {
        Expr::Column(name) => SqlType::from_column(
            table
                .column(name)
                .ok_or_else(|| Error::Name(format!("column '{name}' not found in '{}'", table.name)))?
                .column_type(),
        ),
        Expr::Literal(lit) => match literal_value(lit) {
            Value::Int(_) => SqlType::Int,
            Value::Float(_) => SqlType::Float,
            Value::Str(_) => SqlType::Str,
            Value::Null => SqlType::Null,
        },
        Expr::Star => {
            return Err(Error::Type("'*' is only allowed as a projection or in COUNT(*)".into()))
        }
        Expr::Unary { op, expr } => {
            let t = type_of(expr, table)?;
            match op {
                UnaryOp::Neg => {
                    require_numeric(t, "unary minus")?;
                    t
                }
                UnaryOp::Not => {
                    require_numeric(t, "NOT")?;
                    SqlType::Int
                }
            }
        }
        Expr::Binary { op, left, right } => {
            let (l, r) = (type_of(left, table)?, type_of(right, table)?);
            if op.is_arithmetic() {
                require_numeric(l, op.symbol())?;
                require_numeric(r, op.symbol())?;
                match (op, unify(l, r, op.symbol())?) {
                    (BinaryOp::Divide, _) => SqlType::Float,
                    (_, t) => t,
                }
            } else if op.is_comparison() {
                unify(l, r, &format!("comparison '{}'", op.symbol()))?;
                SqlType::Int
            } else {
                require_numeric(l, op.symbol())?;
                require_numeric(r, op.symbol())?;
                SqlType::Int
            }
        }
        Expr::IsNull { expr, .. } => {
            type_of(expr, table)?;
            SqlType::Int
        }
        Expr::Case {
            branches,
            else_result,
        } => {
            let mut t = SqlType::Null;
            for (cond, result) in branches {
                require_numeric(type_of(cond, table)?, "CASE WHEN condition")?;
                t = unify(t, type_of(result, table)?, "CASE")?;
            }
            if let Some(e) = else_result {
                t = unify(t, type_of(e, table)?, "CASE")?;
            }
            t
        }
        Expr::Coalesce(args) => {
            let mut t = SqlType::Null;
            for a in args {
                t = unify(t, type_of(a, table)?, "COALESCE")?;
            }
            t
        }
        Expr::Aggregate { func, args } => {
            if args.first() == Some(&Expr::Star) {
                return Ok(SqlType::Int);
            }
            let arg_types = args
                .iter()
                .map(|a| type_of(a, table))
                .collect::<Result<Vec<_>>>()?;
            match func {
                AggregateFunc::Count => SqlType::Int,
                AggregateFunc::Min | AggregateFunc::Max => arg_types[0],
                AggregateFunc::Sum => {
                    require_numeric(arg_types[0], "SUM")?;
                    arg_types[0]
                }
                AggregateFunc::Avg => {
                    require_numeric(arg_types[0], "AVG")?;
                    SqlType::Float
                }
                AggregateFunc::Corr => {
                    for t in &arg_types {
                        require_numeric(*t, "CORR")?;
                    }
                    SqlType::Float
                }
            }
        }
    })
}

/// SQL truth value: `Some(true/false)` or `None` for NULL.
fn truth(v: &Value) -> Option<bool> {
    match v {
        Value::Int(i) => Some(*i != 0),
        Value::Float(f) => Some(*f != 0.0),
        Value::Str(_) | Value::Null => None,
    }
}

fn bool_value(b: Option<bool>) -> Value {
    b.map_or(Value::Null, |b| Value::Int(b as i64))
}

fn arithmetic(op: BinaryOp, l: Value, r: Value) -> Value {
    if l.is_null() || r.is_null() {
        return Value::Null;
    }
    if op == BinaryOp::Divide {
        let (a, b) = (l.as_f64().unwrap_or(f64::NAN), r.as_f64().unwrap_or(f64::NAN));
        return if b == 0.0 { Value::Null } else { Value::Float(a / b) };
    }
    match (l, r) {
        (Value::Int(a), Value::Int(b)) => {
            let v = match op {
                BinaryOp::Plus => a.checked_add(b),
                BinaryOp::Minus => a.checked_sub(b),
                _ => a.checked_mul(b),
            };
            // overflow is NULL rather than a silent wrap
            v.map_or(Value::Null, Value::Int)
        }
        (l, r) => {
            let (a, b) = (l.as_f64().unwrap_or(f64::NAN), r.as_f64().unwrap_or(f64::NAN));
            Value::Float(match op {
                BinaryOp::Plus => a + b,
                BinaryOp::Minus => a - b,
                _ => a * b,
            })
        }
    }
}

fn compare(op: BinaryOp, l: &Value, r: &Value) -> Value {
    use std::cmp::Ordering::*;
    let Some(ord) = l.sql_cmp(r) else {
        return Value::Null;
    };
    let b = match op {
        BinaryOp::Eq => ord == Equal,
        BinaryOp::NotEq => ord != Equal,
        BinaryOp::Lt => ord == Less,
        BinaryOp::LtEq => ord != Greater,
        BinaryOp::Gt => ord == Greater,
        _ => ord != Less,
    };
    Value::Int(b as i64)
}

/// Where column references and aggregate calls get their values.
trait EvalContext {
    fn column(&self, name: &str) -> Value;
    fn aggregate(&self, func: AggregateFunc, args: &[Expr]) -> Value;
}

struct RowContext<'a> {
    table: &'a Table,
    row: usize,
}

impl EvalContext for RowContext<'_> {
    fn column(&self, name: &str) -> Value {
        self.table
            .column(name)
            .map_or(Value::Null, |c| c.data.get(self.row))
    }

    fn aggregate(&self, _: AggregateFunc, _: &[Expr]) -> Value {
        // rejected by the mix check before evaluation
        Value::Null
    }
}

struct GroupContext<'a> {
    table: &'a Table,
    rows: &'a [usize],
}

impl EvalContext for GroupContext<'_> {
    fn column(&self, _: &str) -> Value {
        Value::Null
    }

    fn aggregate(&self, func: AggregateFunc, args: &[Expr]) -> Value {
        if args.first() == Some(&Expr::Star) {
            return Value::Int(self.rows.len() as i64);
        }
        let values = |e: &Expr| -> Vec<Value> {
            self.rows
                .iter()
                .map(|&row| eval(e, &RowContext { table: self.table, row }))
                .collect()
        };
        let xs = values(&args[0]);
        match func {
            AggregateFunc::Count => Value::Int(xs.iter().filter(|v| !v.is_null()).count() as i64),
            AggregateFunc::Sum => {
                let mut acc: Option<Value> = None;
                for v in xs.into_iter().filter(|v| !v.is_null()) {
                    acc = Some(match acc {
                        None => v,
                        Some(a) => arithmetic(BinaryOp::Plus, a, v),
                    });
                }
                acc.unwrap_or(Value::Null)
            }
            AggregateFunc::Avg => {
                let nums: Vec<f64> = xs.iter().filter_map(Value::as_f64).collect();
                if nums.is_empty() {
                    Value::Null
                } else {
                    Value::Float(nums.iter().sum::<f64>() / nums.len() as f64)
                }
            }
            AggregateFunc::Min | AggregateFunc::Max => {
                let want = if func == AggregateFunc::Min {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
                xs.into_iter()
                    .filter(|v| !v.is_null())
                    .reduce(|best, v| if v.sql_cmp(&best) == Some(want) { v } else { best })
                    .unwrap_or(Value::Null)
            }
            AggregateFunc::Corr => {
                let ys = values(&args[1]);
                let x: Vec<Option<f64>> = xs.iter().map(Value::as_f64).collect();
                let y: Vec<Option<f64>> = ys.iter().map(Value::as_f64).collect();
                corr(&x, &y).map_or(Value::Null, Value::Float)
            }
        }
    }
}

fn eval(expr: &Expr, ctx: &dyn EvalContext) -> Value {
    match expr {
        Expr::Column(name) => ctx.column(name),
        Expr::Literal(lit) => literal_value(lit),
        Expr::Star => Value::Null,
        Expr::Unary { op, expr } => {
            let v = eval(expr, ctx);
            match op {
                UnaryOp::Not => bool_value(truth(&v).map(|b| !b)),
                UnaryOp::Neg => match v {
                    Value::Int(i) => i.checked_neg().map_or(Value::Null, Value::Int),
                    Value::Float(f) => Value::Float(-f),
                    _ => Value::Null,
                },
            }
        }
        Expr::Binary { op, left, right } => match op {
            BinaryOp::And => {
                let l = truth(&eval(left, ctx));
                if l == Some(false) {
                    return Value::Int(0);
                }
                let r = truth(&eval(right, ctx));
                bool_value(match (l, r) {
                    (_, Some(false)) => Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                })
            }
            BinaryOp::Or => {
                let l = truth(&eval(left, ctx));
                if l == Some(true) {
                    return Value::Int(1);
                }
                let r = truth(&eval(right, ctx));
                bool_value(match (l, r) {
                    (_, Some(true)) => Some(true),
                    (Some(false), Some(false)) => Some(false),
                    _ => None,
                })
            }
            op if op.is_comparison() => compare(*op, &eval(left, ctx), &eval(right, ctx)),
            op => arithmetic(*op, eval(left, ctx), eval(right, ctx)),
        },
        Expr::IsNull { expr, negated } => {
            Value::Int((eval(expr, ctx).is_null() != *negated) as i64)
        }
        Expr::Case {
            branches,
            else_result,
        } => {
            for (cond, result) in branches {
                if truth(&eval(cond, ctx)) == Some(true) {
                    return eval(result, ctx);
                }
            }
            else_result.as_ref().map_or(Value::Null, |e| eval(e, ctx))
        }
        Expr::Coalesce(args) => args
            .iter()
            .map(|a| eval(a, ctx))
            .find(|v| !v.is_null())
            .unwrap_or(Value::Null),
        Expr::Aggregate { func, args } => ctx.aggregate(*func, args),
    }
}

/// True if `expr` reads a column (or `*`) outside of any aggregate.
fn has_bare_column(expr: &Expr) -> bool {
    match expr {
        Expr::Column(_) | Expr::Star => true,
        Expr::Literal(_) | Expr::Aggregate { .. } => false,
        Expr::Unary { expr, .. } | Expr::IsNull { expr, .. } => has_bare_column(expr),
        Expr::Binary { left, right, .. } => has_bare_column(left) || has_bare_column(right),
        Expr::Case {
            branches,
            else_result,
        } => {
            branches
                .iter()
                .any(|(c, r)| has_bare_column(c) || has_bare_column(r))
                || else_result.as_ref().is_some_and(|e| has_bare_column(e))
        }
        Expr::Coalesce(args) => args.iter().any(has_bare_column),
    }
}

/// Rows of `table` for which `filter` is true.
pub fn filter_rows(table: &Table, filter: Option<&Expr>) -> Result<Vec<usize>> {
    let Some(pred) = filter else {
        return Ok((0..table.row_count()).collect());
    };
    if pred.contains_aggregate() {
        return Err(Error::Mix("aggregates are not allowed in WHERE".into()));
    }
    require_numeric(type_of(pred, table)?, "WHERE")?;
    Ok((0..table.row_count())
        .filter(|&row| truth(&eval(pred, &RowContext { table, row })) == Some(true))
        .collect())
}

pub fn execute_select(stmt: &SelectStmt, catalog: &Catalog) -> Result<Table> {
    let table = catalog.table(stmt.from.base())?;
    select_from_table(stmt, table)
}

/// Evaluates `stmt` against `table`, ignoring `stmt.from`.
pub fn select_from_table(stmt: &SelectStmt, table: &Table) -> Result<Table> {
    let aggregate = stmt.projections.iter().any(|p| p.expr.contains_aggregate());
    if aggregate {
        if let Some(p) = stmt.projections.iter().find(|p| has_bare_column(&p.expr)) {
            return Err(Error::Mix(format!(
                "projection '{}' reads columns outside an aggregate",
                p.expr
            )));
        }
    }

    // type-check every projection up front
    let mut outputs: Vec<(String, SqlType, Option<&Expr>)> = Vec::new();
    for (i, p) in stmt.projections.iter().enumerate() {
        if p.expr == Expr::Star {
            for c in table.columns() {
                outputs.push((c.name.clone(), SqlType::from_column(c.column_type()), None));
            }
            continue;
        }
        let t = type_of(&p.expr, table)?;
        let name = match (&p.alias, &p.expr) {
            (Some(a), _) => a.clone(),
            (None, Expr::Column(c)) => table.column(c).map_or(c.clone(), |col| col.name.clone()),
            _ => format!("f{i}_"),
        };
        outputs.push((name, t, Some(&p.expr)));
    }

    let rows = filter_rows(table, stmt.filter.as_ref())?;

    let mut columns = Vec::with_capacity(outputs.len());
    for (name, ty, expr) in outputs {
        let data = match expr {
            None => table.column(&name).expect("star column").data.take(&rows),
            Some(e) if aggregate => {
                let mut data = ColumnData::empty(ty.column_type());
                data.push(eval(e, &GroupContext { table, rows: &rows }))?;
                data
            }
            Some(Expr::Column(c)) => table.column(c).expect("type-checked").data.take(&rows),
            Some(e) => {
                let mut data = ColumnData::empty(ty.column_type());
                for &row in &rows {
                    data.push(eval(e, &RowContext { table, row }))?;
                }
                data
            }
        };
        columns.push(Column::new(name, data));
    }
    let row_count = if aggregate { 1 } else { rows.len() };
    Table::with_row_count("result", columns, row_count)
}

/// Pearson correlation over pairs where both sides are non-NULL. `None` when
/// fewer than two pairs survive or either side has zero variance.
pub fn corr(x: &[Option<f64>], y: &[Option<f64>]) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .collect();
    if pairs.len() < 2 {
        return None;
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in &pairs {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    // the (n - 1) factors of the sample covariance and deviations cancel
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
