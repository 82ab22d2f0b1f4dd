//! Recursive-descent parser for the SQL dialect.

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::options::{ModelOption, OptionLiteral, OptionsMap};
use crate::error::{Position, SqlError};

pub fn parse_statement(text: &str) -> Result<Statement, SqlError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(text, tokens);
    let stmt = p.statement()?;
    p.eat_symbol(";");
    if let Some(tok) = p.peek() {
        return Err(p.error_at(tok, &[";", "end of input"]));
    }
    Ok(stmt)
}

pub fn parse_expr(text: &str) -> Result<Expr, SqlError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(text, tokens);
    let e = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(p.error_at(tok, &["end of input"]));
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: Position,
    in_aggregate: bool,
}

type PResult<T> = Result<T, SqlError>;

impl Parser {
    fn new(text: &str, tokens: Vec<Token>) -> Self {
        // End-of-input errors point just past the last token.
        let end = match tokens.last() {
            Some(t) => {
                let mut line = t.line;
                let mut column = t.column;
                for c in text[t.span.clone()].chars() {
                    if c == '\n' {
                        line += 1;
                        column = 1;
                    } else {
                        column += 1;
                    }
                }
                Position::new(line, column)
            }
            None => Position::new(1, 1),
        };
        Parser {
            tokens,
            pos: 0,
            end,
            in_aggregate: false,
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_nth(&self, n: usize) -> Option<&Token> {
        self.tokens.get(self.pos + n)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn current_position(&self) -> Position {
        self.peek().map(Token::position).unwrap_or(self.end)
    }

    fn error_at(&self, tok: &Token, expected: &[&str]) -> SqlError {
        SqlError::Parse {
            position: tok.position(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.text.clone(),
        }
    }

    fn error(&self, expected: &[&str]) -> SqlError {
        match self.peek() {
            Some(tok) => self.error_at(tok, expected),
            None => SqlError::Parse {
                position: self.end,
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: "end of input".into(),
            },
        }
    }

    fn check_keyword(&self, kw: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(kw))
    }

    fn check_symbol(&self, sym: &str) -> bool {
        self.peek().is_some_and(|t| t.is_symbol(sym))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.check_keyword(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_symbol(&mut self, sym: &str) -> bool {
        if self.check_symbol(sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.error(&[kw]))
        }
    }

    fn expect_symbol(&mut self, sym: &str) -> PResult<()> {
        if self.eat_symbol(sym) {
            Ok(())
        } else {
            Err(self.error(&[sym]))
        }
    }

    /// Bare identifier with a case-insensitive match, e.g. `ML` or `CSV`.
    fn check_word(&self, n: usize, word: &str) -> bool {
        self.peek_nth(n)
            .is_some_and(|t| t.kind == TokenKind::Identifier && t.text.eq_ignore_ascii_case(word))
    }

    fn identifier(&mut self) -> PResult<String> {
        match self.peek() {
            Some(t) if matches!(t.kind, TokenKind::Identifier | TokenKind::QuotedIdentifier) => {
                let v = t.ident_value().unwrap_or_default();
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn qualified_name(&mut self) -> PResult<QualifiedName> {
        let start = self.current_position();
        let mut parts = Vec::new();
        loop {
            let quoted = self
                .peek()
                .is_some_and(|t| t.kind == TokenKind::QuotedIdentifier);
            let id = self.identifier()?;
            if quoted {
                // `project.dataset.table` in one pair of backticks
                parts.extend(id.split('.').map(str::to_string));
            } else {
                parts.push(id);
            }
            if !self.eat_symbol(".") {
                break;
            }
        }
        if parts.len() > 3 || parts.iter().any(String::is_empty) {
            return Err(SqlError::Parse {
                position: start,
                expected: vec!["name with 1 to 3 non-empty parts".into()],
                found: parts.join("."),
            });
        }
        Ok(QualifiedName(parts))
    }

    fn statement(&mut self) -> PResult<Statement> {
        if self.check_keyword("CREATE") {
            return self.create();
        }
        if self.check_word(0, "ML") && self.peek_nth(1).is_some_and(|t| t.is_symbol(".")) {
            return self.ml_call();
        }
        if self.check_keyword("SELECT") {
            return self.select_or_ml();
        }
        Err(self.error(&["SELECT", "CREATE", "ML"]))
    }

    fn create(&mut self) -> PResult<Statement> {
        self.expect_keyword("CREATE")?;
        let replace = if self.eat_keyword("OR") {
            self.expect_keyword("REPLACE")?;
            true
        } else {
            false
        };
        if self.eat_keyword("MODEL") {
            let name = self.qualified_name()?;
            let options_pos = self.current_position();
            let options = if self.check_keyword("OPTIONS") {
                self.options()?
            } else {
                OptionsMap::new()
            };
            if options.model_type().is_none() {
                return Err(SqlError::Option {
                    position: options_pos,
                    key: "model_type".into(),
                    message: "missing required option model_type".into(),
                });
            }
            self.expect_keyword("AS")?;
            let query = if self.eat_symbol("(") {
                let q = self.select()?;
                self.expect_symbol(")")?;
                q
            } else {
                self.select()?
            };
            Ok(Statement::CreateModel(CreateModelStmt {
                name,
                replace,
                options,
                query,
            }))
        } else if self.eat_keyword("TABLE") {
            let name = self.qualified_name()?;
            self.expect_keyword("FROM")?;
            if !self.check_word(0, "CSV") {
                return Err(self.error(&["CSV"]));
            }
            self.pos += 1;
            let path = match self.peek() {
                Some(t) if t.kind == TokenKind::StringLiteral => t.string_value().unwrap_or_default(),
                _ => return Err(self.error(&["string literal"])),
            };
            self.pos += 1;
            Ok(Statement::CreateTableFromCsv(CreateTableFromCsvStmt {
                name,
                replace,
                path,
            }))
        } else {
            Err(self.error(&["MODEL", "TABLE"]))
        }
    }

    fn options(&mut self) -> PResult<OptionsMap> {
        self.expect_keyword("OPTIONS")?;
        self.expect_symbol("(")?;
        let mut map = OptionsMap::new();
        if self.eat_symbol(")") {
            return Ok(map);
        }
        loop {
            let key_tok = match self.peek() {
                Some(t) if matches!(t.kind, TokenKind::Identifier | TokenKind::QuotedIdentifier) => {
                    t.clone()
                }
                _ => return Err(self.error(&["option name"])),
            };
            self.pos += 1;
            let key = key_tok.ident_value().unwrap_or_default().to_ascii_lowercase();
            self.expect_symbol("=")?;
            let value = self.option_literal()?;
            let option = ModelOption::from_literal(&key, &value).map_err(|message| {
                SqlError::Option {
                    position: key_tok.position(),
                    key: key.clone(),
                    message,
                }
            })?;
            if !map.insert(option) {
                return Err(SqlError::Option {
                    position: key_tok.position(),
                    key: key.clone(),
                    message: format!("option {key} given more than once"),
                });
            }
            if self.eat_symbol(")") {
                return Ok(map);
            }
            if !self.eat_symbol(",") {
                return Err(self.error(&[",", ")"]));
            }
        }
    }

    fn option_literal(&mut self) -> PResult<OptionLiteral> {
        if self.eat_symbol("[") {
            let mut items = Vec::new();
            if self.eat_symbol("]") {
                return Ok(OptionLiteral::List(items));
            }
            loop {
                items.push(self.option_literal()?);
                if self.eat_symbol("]") {
                    return Ok(OptionLiteral::List(items));
                }
                if !self.eat_symbol(",") {
                    return Err(self.error(&[",", "]"]));
                }
            }
        }
        match self.peek() {
            Some(t) if t.kind == TokenKind::StringLiteral => {
                let s = t.string_value().unwrap_or_default();
                self.pos += 1;
                Ok(OptionLiteral::String(s))
            }
            Some(t) if t.kind == TokenKind::NumberLiteral => {
                let v = self.number()?;
                Ok(OptionLiteral::Number(v))
            }
            Some(t) if t.is_symbol("-") => {
                self.pos += 1;
                Ok(OptionLiteral::Number(-self.number()?))
            }
            _ => Err(self.error(&["string", "number", "["])),
        }
    }

    fn number(&mut self) -> PResult<f64> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::NumberLiteral => {
                let v: f64 = t.text.parse().map_err(|_| self.error_at(t, &["number"]))?;
                if !v.is_finite() {
                    return Err(self.error_at(t, &["finite number"]));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error(&["number"])),
        }
    }

    /// `SELECT ...` which may turn out to be `SELECT * FROM ML.<fn>(...)`.
    fn select_or_ml(&mut self) -> PResult<Statement> {
        let is_ml = self.peek_nth(1).is_some_and(|t| t.is_symbol("*"))
            && self.peek_nth(2).is_some_and(|t| t.is_keyword("FROM"))
            && self.check_word(3, "ML")
            && self.peek_nth(4).is_some_and(|t| t.is_symbol("."));
        if is_ml {
            self.pos += 3;
            return self.ml_call();
        }
        Ok(Statement::Select(self.select()?))
    }

    fn ml_call(&mut self) -> PResult<Statement> {
        self.pos += 1; // ML
        self.expect_symbol(".")?;
        let fn_tok = match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => t.clone(),
            _ => return Err(self.error(&["EVALUATE", "PREDICT", "FEATURE_IMPORTANCE", "ROC_CURVE"])),
        };
        let func = fn_tok.text.to_ascii_uppercase();
        if !matches!(
            func.as_str(),
            "EVALUATE" | "PREDICT" | "FEATURE_IMPORTANCE" | "ROC_CURVE"
        ) {
            return Err(self.error_at(
                &fn_tok,
                &["EVALUATE", "PREDICT", "FEATURE_IMPORTANCE", "ROC_CURVE"],
            ));
        }
        self.pos += 1;
        self.expect_symbol("(")?;
        self.expect_keyword("MODEL")?;
        let model = self.qualified_name()?;
        let stmt = match func.as_str() {
            "EVALUATE" => {
                let input = if self.eat_symbol(",") {
                    Some(self.ml_input()?)
                } else {
                    None
                };
                Statement::MlEvaluate(MlEvaluateStmt { model, input })
            }
            "PREDICT" => {
                self.expect_symbol(",")?;
                let input = self.ml_input()?;
                let threshold = if self.eat_symbol(",") {
                    self.threshold()?
                } else {
                    DEFAULT_THRESHOLD
                };
                Statement::MlPredict(MlPredictStmt {
                    model,
                    input,
                    threshold,
                })
            }
            "FEATURE_IMPORTANCE" => Statement::MlFeatureImportance { model },
            _ => Statement::MlRocCurve { model },
        };
        self.expect_symbol(")")?;
        Ok(stmt)
    }

    /// `(SELECT ...)` or `TABLE name`
    fn ml_input(&mut self) -> PResult<SelectStmt> {
        if self.eat_keyword("TABLE") {
            let name = self.qualified_name()?;
            return Ok(SelectStmt {
                projections: vec![Projection {
                    expr: Expr::Star,
                    alias: None,
                }],
                from: name,
                filter: None,
            });
        }
        self.expect_symbol("(")?;
        let q = self.select()?;
        self.expect_symbol(")")?;
        Ok(q)
    }

    /// `STRUCT(0.6 AS threshold)` or a bare number.
    fn threshold(&mut self) -> PResult<f64> {
        let pos = self.current_position();
        let value = if self.check_word(0, "STRUCT") {
            self.pos += 1;
            self.expect_symbol("(")?;
            let v = self.number()?;
            self.expect_keyword("AS")?;
            let name_pos = self.current_position();
            let name = self.identifier()?;
            if !name.eq_ignore_ascii_case("threshold") {
                return Err(SqlError::Option {
                    position: name_pos,
                    key: name.clone(),
                    message: format!("unknown ML.PREDICT setting '{name}'"),
                });
            }
            self.expect_symbol(")")?;
            v
        } else {
            self.number()?
        };
        if !(0.0..=1.0).contains(&value) {
            return Err(SqlError::Option {
                position: pos,
                key: "threshold".into(),
                message: "threshold must lie in [0, 1]".into(),
            });
        }
        Ok(value)
    }

    fn select(&mut self) -> PResult<SelectStmt> {
        self.expect_keyword("SELECT")?;
        let mut projections = Vec::new();
        loop {
            let expr = if self.eat_symbol("*") {
                Expr::Star
            } else {
                self.expr()?
            };
            let alias = if self.eat_keyword("AS") {
                if expr == Expr::Star {
                    return Err(self.error(&[",", "FROM"]));
                }
                Some(self.identifier()?)
            } else {
                None
            };
            projections.push(Projection { expr, alias });
            if !self.eat_symbol(",") {
                break;
            }
        }
        self.expect_keyword("FROM")?;
        let from = self.qualified_name()?;
        let filter = if self.eat_keyword("WHERE") {
            Some(self.expr()?)
        } else {
            None
        };
        Ok(SelectStmt {
            projections,
            from,
            filter,
        })
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let mut left = self.and_expr()?;
        while self.eat_keyword("OR") {
            let right = self.and_expr()?;
            left = Expr::binary(BinaryOp::Or, left, right);
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut left = self.not_expr()?;
        while self.eat_keyword("AND") {
            let right = self.not_expr()?;
            left = Expr::binary(BinaryOp::And, left, right);
        }
        Ok(left)
    }

    fn not_expr(&mut self) -> PResult<Expr> {
        if self.eat_keyword("NOT") {
            let inner = self.not_expr()?;
            return Ok(Expr::Unary {
                op: UnaryOp::Not,
                expr: Box::new(inner),
            });
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let mut left = self.additive()?;
        loop {
            if self.eat_keyword("IS") {
                let negated = self.eat_keyword("NOT");
                self.expect_keyword("NULL")?;
                left = Expr::IsNull {
                    expr: Box::new(left),
                    negated,
                };
                continue;
            }
            let op = match self.peek().map(|t| (t.kind, t.text.as_str())) {
                Some((TokenKind::Symbol, "=")) => BinaryOp::Eq,
                Some((TokenKind::Symbol, "<>" | "!=")) => BinaryOp::NotEq,
                Some((TokenKind::Symbol, "<")) => BinaryOp::Lt,
                Some((TokenKind::Symbol, "<=")) => BinaryOp::LtEq,
                Some((TokenKind::Symbol, ">")) => BinaryOp::Gt,
                Some((TokenKind::Symbol, ">=")) => BinaryOp::GtEq,
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.additive()?;
            left = Expr::binary(op, left, right);
        }
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut left = self.multiplicative()?;
        loop {
            let op = if self.check_symbol("+") {
                BinaryOp::Plus
            } else if self.check_symbol("-") {
                BinaryOp::Minus
            } else {
                return Ok(left);
            };
            self.pos += 1;
            let right = self.multiplicative()?;
            left = Expr::binary(op, left, right);
        }
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let mut left = self.unary()?;
        loop {
            let op = if self.check_symbol("*") {
                BinaryOp::Multiply
            } else if self.check_symbol("/") {
                BinaryOp::Divide
            } else {
                return Ok(left);
            };
            self.pos += 1;
            let right = self.unary()?;
            left = Expr::binary(op, left, right);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat_symbol("-") {
            // a minus directly on a number literal folds into the literal
            if self
                .peek()
                .is_some_and(|t| t.kind == TokenKind::NumberLiteral)
            {
                let v = self.number()?;
                return Ok(Expr::number(-v));
            }
            let inner = self.unary()?;
            return Ok(Expr::Unary {
                op: UnaryOp::Neg,
                expr: Box::new(inner),
            });
        }
        if self.eat_symbol("+") {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.error(&["expression"])),
        };
        match tok.kind {
            TokenKind::NumberLiteral => Ok(Expr::number(self.number()?)),
            TokenKind::StringLiteral => {
                self.pos += 1;
                Ok(Expr::Literal(Literal::String(
                    tok.string_value().unwrap_or_default(),
                )))
            }
            TokenKind::Keyword if tok.is_keyword("NULL") => {
                self.pos += 1;
                Ok(Expr::Literal(Literal::Null))
            }
            TokenKind::Keyword if tok.is_keyword("CASE") => self.case_expr(),
            TokenKind::Symbol if tok.text == "(" => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_symbol(")")?;
                Ok(e)
            }
            TokenKind::Identifier
                if self.peek_nth(1).is_some_and(|t| t.is_symbol("(")) =>
            {
                self.function_call()
            }
            TokenKind::Identifier | TokenKind::QuotedIdentifier => {
                let mut name = self.identifier()?;
                // `t.col` resolves to `col`
                while self.check_symbol(".")
                    && self.peek_nth(1).is_some_and(|t| {
                        matches!(t.kind, TokenKind::Identifier | TokenKind::QuotedIdentifier)
                    })
                {
                    self.pos += 1;
                    name = self.identifier()?;
                }
                Ok(Expr::Column(name))
            }
            _ => Err(self.error(&["expression"])),
        }
    }

    fn case_expr(&mut self) -> PResult<Expr> {
        self.expect_keyword("CASE")?;
        let mut branches = Vec::new();
        while self.eat_keyword("WHEN") {
            let cond = self.expr()?;
            self.expect_keyword("THEN")?;
            let result = self.expr()?;
            branches.push((cond, result));
        }
        if branches.is_empty() {
            return Err(self.error(&["WHEN"]));
        }
        let else_result = if self.eat_keyword("ELSE") {
            Some(Box::new(self.expr()?))
        } else {
            None
        };
        if !self.eat_keyword("END") {
            return Err(self.error(&["WHEN", "ELSE", "END"]));
        }
        Ok(Expr::Case {
            branches,
            else_result,
        })
    }

    fn function_call(&mut self) -> PResult<Expr> {
        let name_tok = self.next().expect("checked by caller");
        self.expect_symbol("(")?;
        let name = name_tok.text.to_ascii_uppercase();
        if name == "COALESCE" {
            let args = self.expr_list()?;
            return Ok(Expr::Coalesce(args));
        }
        let Some(func) = AggregateFunc::from_name(&name) else {
            return Err(self.error_at(
                &name_tok,
                &["COALESCE", "COUNT", "SUM", "AVG", "MIN", "MAX", "CORR"],
            ));
        };
        if self.in_aggregate {
            return Err(SqlError::Parse {
                position: name_tok.position(),
                expected: vec!["non-aggregate expression".into()],
                found: format!("nested aggregate {name}"),
            });
        }
        if func == AggregateFunc::Count && self.eat_symbol("*") {
            self.expect_symbol(")")?;
            return Ok(Expr::Aggregate {
                func,
                args: vec![Expr::Star],
            });
        }
        self.in_aggregate = true;
        let args = self.expr_list();
        self.in_aggregate = false;
        let args = args?;
        if args.len() != func.arity() {
            return Err(SqlError::Parse {
                position: name_tok.position(),
                expected: vec![format!("{} argument(s) to {name}", func.arity())],
                found: format!("{} argument(s)", args.len()),
            });
        }
        Ok(Expr::Aggregate { func, args })
    }

    /// Comma-separated expressions up to and including the closing `)`.
    fn expr_list(&mut self) -> PResult<Vec<Expr>> {
        let mut args = vec![self.expr()?];
        while self.eat_symbol(",") {
            args.push(self.expr()?);
        }
        self.expect_symbol(")")?;
        Ok(args)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sql::options::{ModelType, SplitMethod};

    pub(crate) const CASE_STUDY_MODEL: &str = "CREATE OR REPLACE MODEL `project_id.dataset_id.diabetes_model`
OPTIONS(
  model_type = 'boosted_tree_classifier',
  input_label_cols = ['Diabetes_binary'],
  data_split_method = 'RANDOM',
  data_split_eval_fraction = 0.2,
  max_iterations = 150,
  learn_rate = 0.05,
  min_rel_progress = 0.00001,
  l1_reg = 0.1,
  l2_reg = 2.0
) AS
SELECT
  *
FROM
  `project_id.dataset_id.diabetes_data`
WHERE
  Diabetes_binary IS NOT NULL;";

    #[test]
    fn case_study_options() {
        let Statement::CreateModel(c) = parse_statement(CASE_STUDY_MODEL).unwrap() else {
            panic!("expected CREATE MODEL");
        };
        assert!(c.replace);
        assert_eq!(c.name.base(), "diabetes_model");
        assert_eq!(c.name.0.len(), 3);
        let o = &c.options;
        assert_eq!(o.model_type(), Some(ModelType::BoostedTreeClassifier));
        assert_eq!(o.input_label_cols(), Some(vec!["Diabetes_binary".to_string()]));
        assert_eq!(o.data_split_method(), Some(SplitMethod::Random));
        assert_eq!(o.data_split_eval_fraction(), Some(0.2));
        assert_eq!(o.max_iterations(), Some(150));
        assert_eq!(o.learn_rate(), Some(0.05));
        assert_eq!(o.min_rel_progress(), Some(0.00001));
        assert_eq!(o.l1_reg(), Some(0.1));
        assert_eq!(o.l2_reg(), Some(2.0));
        assert_eq!(o.len(), 9);
        assert_eq!(c.query.from.base(), "diabetes_data");
        assert_eq!(
            c.query.filter,
            Some(Expr::IsNull {
                expr: Box::new(Expr::column("Diabetes_binary")),
                negated: true
            })
        );
    }

    #[test]
    fn corr_select() {
        let stmt = parse_statement(
            "SELECT CORR(feature_value, diabetes_binary) AS correlation FROM diabetes_data",
        )
        .unwrap();
        let Statement::Select(s) = stmt else { panic!() };
        assert_eq!(s.projections.len(), 1);
        assert_eq!(s.projections[0].alias.as_deref(), Some("correlation"));
        assert_eq!(
            s.projections[0].expr,
            Expr::Aggregate {
                func: AggregateFunc::Corr,
                args: vec![Expr::column("feature_value"), Expr::column("diabetes_binary")]
            }
        );
    }

    #[test]
    fn unknown_option_named() {
        let err =
            parse_statement("CREATE MODEL m OPTIONS(bogus_key = 1) AS SELECT * FROM t").unwrap_err();
        match err {
            SqlError::Option { key, .. } => assert_eq!(key, "bogus_key"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_domain_option() {
        let err = parse_statement(
            "CREATE MODEL m OPTIONS(model_type='logistic_reg', data_split_eval_fraction = 1.5) AS SELECT * FROM t",
        )
        .unwrap_err();
        assert!(matches!(err, SqlError::Option { ref key, .. } if key == "data_split_eval_fraction"));
    }

    #[test]
    fn nested_aggregate_rejected() {
        assert!(parse_statement("SELECT SUM(AVG(x)) FROM t").is_err());
        assert!(parse_statement("SELECT SUM(x + COUNT(*)) FROM t").is_err());
        assert!(parse_statement("SELECT SUM(x) + COUNT(*) FROM t").is_ok());
    }

    #[test]
    fn ml_function_forms() {
        let a = parse_statement("SELECT * FROM ML.EVALUATE(MODEL m)").unwrap();
        let b = parse_statement("ml.evaluate(MODEL m);").unwrap();
        assert_eq!(a, b);
        let p = parse_statement(
            "SELECT * FROM ML.PREDICT(MODEL d.m, (SELECT * FROM t WHERE x > 1), STRUCT(0.7 AS threshold))",
        )
        .unwrap();
        let Statement::MlPredict(p) = p else { panic!() };
        assert_eq!(p.threshold, 0.7);
        assert_eq!(p.model.base(), "m");
        assert!(parse_statement("SELECT * FROM ML.PREDICT(MODEL m, TABLE t, 1.5)").is_err());
        assert!(matches!(
            parse_statement("ML.ROC_CURVE(MODEL m)").unwrap(),
            Statement::MlRocCurve { .. }
        ));
    }

    #[test]
    fn parse_error_position_and_expected() {
        let err = parse_statement("SELECT a\nFROM").unwrap_err();
        let SqlError::Parse {
            position, expected, ..
        } = err
        else {
            panic!()
        };
        assert_eq!(position, Position::new(2, 5));
        assert_eq!(expected, vec!["identifier".to_string()]);
    }

    #[test]
    fn case_insensitive_keywords() {
        assert_eq!(
            parse_statement("select a from t where b is null").unwrap(),
            parse_statement("SELECT a FROM t WHERE b IS NULL").unwrap()
        );
    }

    #[test]
    fn negative_literals_and_precedence() {
        let e = parse_expr("1 + 2 * -3").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinaryOp::Plus,
                Expr::number(1.0),
                Expr::binary(BinaryOp::Multiply, Expr::number(2.0), Expr::number(-3.0))
            )
        );
        let e = parse_expr("NOT a = 1 AND b IS NOT NULL OR c").unwrap();
        let Expr::Binary { op: BinaryOp::Or, .. } = e else { panic!("{e:?}") };
    }

    #[test]
    fn too_many_name_parts() {
        assert!(parse_statement("SELECT * FROM a.b.c.d").is_err());
        assert!(parse_statement("SELECT * FROM `a.b.c`").is_ok());
    }

    #[test]
    fn create_table_from_csv() {
        let s = parse_statement("CREATE OR REPLACE TABLE diabetes_data FROM CSV 'data/x.csv'").unwrap();
        let Statement::CreateTableFromCsv(c) = s else { panic!() };
        assert!(c.replace);
        assert_eq!(c.path, "data/x.csv");
    }
}
