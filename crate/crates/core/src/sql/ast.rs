use super::options::OptionsMap;

/// Dotted name with one to three parts, e.g. `project.dataset.table`.
/// Only the last part is used for lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualifiedName(pub Vec<String>);

impl QualifiedName {
    pub fn simple(name: impl Into<String>) -> Self {
        QualifiedName(vec![name.into()])
    }

    pub fn base(&self) -> &str {
        self.0.last().map(String::as_str).unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Select(SelectStmt),
    CreateModel(CreateModelStmt),
    CreateTableFromCsv(CreateTableFromCsvStmt),
    MlEvaluate(MlEvaluateStmt),
    MlPredict(MlPredictStmt),
    MlFeatureImportance { model: QualifiedName },
    MlRocCurve { model: QualifiedName },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub expr: Expr,
    pub alias: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectStmt {
    pub projections: Vec<Projection>,
    pub from: QualifiedName,
    pub filter: Option<Expr>,
}

impl SelectStmt {
    /// `SELECT * FROM <table>`
    pub fn star(table: impl Into<String>) -> Self {
        SelectStmt {
            projections: vec![Projection {
                expr: Expr::Star,
                alias: None,
            }],
            from: QualifiedName::simple(table),
            filter: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CreateModelStmt {
    pub name: QualifiedName,
    pub replace: bool,
    pub options: OptionsMap,
    pub query: SelectStmt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CreateTableFromCsvStmt {
    pub name: QualifiedName,
    pub replace: bool,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlEvaluateStmt {
    pub model: QualifiedName,
    pub input: Option<SelectStmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlPredictStmt {
    pub model: QualifiedName,
    pub input: SelectStmt,
    pub threshold: f64,
}

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Number(f64),
    String(String),
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Eq,
    NotEq,
    Lt,
    LtEq,
    Gt,
    GtEq,
    Plus,
    Minus,
    Multiply,
    Divide,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Eq => "=",
            BinaryOp::NotEq => "<>",
            BinaryOp::Lt => "<",
            BinaryOp::LtEq => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::GtEq => ">=",
            BinaryOp::Plus => "+",
            BinaryOp::Minus => "-",
            BinaryOp::Multiply => "*",
            BinaryOp::Divide => "/",
            BinaryOp::And => "AND",
            BinaryOp::Or => "OR",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinaryOp::Eq | BinaryOp::NotEq | BinaryOp::Lt | BinaryOp::LtEq | BinaryOp::Gt | BinaryOp::GtEq
        )
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(
            self,
            BinaryOp::Plus | BinaryOp::Minus | BinaryOp::Multiply | BinaryOp::Divide
        )
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq
            | BinaryOp::NotEq
            | BinaryOp::Lt
            | BinaryOp::LtEq
            | BinaryOp::Gt
            | BinaryOp::GtEq => 4,
            BinaryOp::Plus | BinaryOp::Minus => 5,
            BinaryOp::Multiply | BinaryOp::Divide => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateFunc {
    Count,
    Sum,
    Avg,
    Min,
    Max,
    Corr,
}

impl AggregateFunc {
    pub fn name(self) -> &'static str {
        match self {
            AggregateFunc::Count => "COUNT",
            AggregateFunc::Sum => "SUM",
            AggregateFunc::Avg => "AVG",
            AggregateFunc::Min => "MIN",
            AggregateFunc::Max => "MAX",
            AggregateFunc::Corr => "CORR",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name.to_ascii_uppercase().as_str() {
            "COUNT" => AggregateFunc::Count,
            "SUM" => AggregateFunc::Sum,
            "AVG" => AggregateFunc::Avg,
            "MIN" => AggregateFunc::Min,
            "MAX" => AggregateFunc::Max,
            "CORR" => AggregateFunc::Corr,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            AggregateFunc::Corr => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Column(String),
    Literal(Literal),
    Unary {
        op: UnaryOp,
        expr: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        left: Box<Expr>,
        right: Box<Expr>,
    },
    IsNull {
        expr: Box<Expr>,
        negated: bool,
    },
    Case {
        branches: Vec<(Expr, Expr)>,
        else_result: Option<Box<Expr>>,
    },
    Coalesce(Vec<Expr>),
    Aggregate {
        func: AggregateFunc,
        args: Vec<Expr>,
    },
    Star,
}

impl Expr {
    pub fn column(name: impl Into<String>) -> Self {
        Expr::Column(name.into())
    }

    pub fn number(v: f64) -> Self {
        Expr::Literal(Literal::Number(v))
    }

    pub fn binary(op: BinaryOp, left: Expr, right: Expr) -> Self {
        Expr::Binary {
            op,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn contains_aggregate(&self) -> bool {
        match self {
            Expr::Aggregate { .. } => true,
            Expr::Column(_) | Expr::Literal(_) | Expr::Star => false,
            Expr::Unary { expr, .. } | Expr::IsNull { expr, .. } => expr.contains_aggregate(),
            Expr::Binary { left, right, .. } => {
                left.contains_aggregate() || right.contains_aggregate()
            }
            Expr::Case {
                branches,
                else_result,
            } => {
                branches
                    .iter()
                    .any(|(c, r)| c.contains_aggregate() || r.contains_aggregate())
                    || else_result.as_ref().is_some_and(|e| e.contains_aggregate())
            }
            Expr::Coalesce(args) => args.iter().any(Expr::contains_aggregate),
        }
    }

    /// Binding strength used by the printer to decide on parentheses.
    pub(crate) fn precedence(&self) -> u8 {
        match self {
            Expr::Binary { op, .. } => op.precedence(),
            Expr::Unary {
                op: UnaryOp::Not, ..
            } => 3,
            Expr::IsNull { .. } => 4,
            Expr::Unary {
                op: UnaryOp::Neg, ..
            } => 7,
            _ => 8,
        }
    }
}
