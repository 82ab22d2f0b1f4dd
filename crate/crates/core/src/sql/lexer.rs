//! Tokenizer for the SQL dialect.
//!
//! Every token keeps the exact source slice it was read from, along with its
//! byte span, so the original text can be rebuilt from the token stream plus
//! the skipped whitespace and comments.

use std::ops::Range;

use crate::error::{Position, SqlError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Identifier,
    QuotedIdentifier,
    StringLiteral,
    NumberLiteral,
    Symbol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Raw source text, including quotes for quoted tokens.
    pub text: String,
    pub line: usize,
    pub column: usize,
    pub span: Range<usize>,
}

impl Token {
    pub fn position(&self) -> Position {
        Position::new(self.line, self.column)
    }

    /// Keyword comparison, case-insensitive. Only true for keyword tokens.
    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text.eq_ignore_ascii_case(kw)
    }

    pub fn is_symbol(&self, sym: &str) -> bool {
        self.kind == TokenKind::Symbol && self.text == sym
    }

    /// Identifier value with quoting removed.
    pub fn ident_value(&self) -> Option<String> {
        match self.kind {
            TokenKind::Identifier => Some(self.text.clone()),
            TokenKind::QuotedIdentifier => {
                Some(self.text[1..self.text.len() - 1].replace("``", "`"))
            }
            _ => None,
        }
    }

    /// String literal value with quotes and `''` escapes resolved.
    pub fn string_value(&self) -> Option<String> {
        if self.kind != TokenKind::StringLiteral {
            return None;
        }
        let quote = &self.text[..1];
        let inner = &self.text[1..self.text.len() - 1];
        Some(inner.replace(&format!("{quote}{quote}"), quote))
    }
}

pub const KEYWORDS: &[&str] = &[
    "AND", "AS", "CASE", "CREATE", "ELSE", "END", "FROM", "IS", "MODEL", "NOT", "NULL",
    "OPTIONS", "OR", "REPLACE", "SELECT", "TABLE", "THEN", "WHEN", "WHERE",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(word))
}

const SYMBOLS2: &[&str] = &["<>", "<=", ">=", "!="];
const SYMBOLS1: &str = "*(),.;=<>+-/[]";

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn position(&self) -> Position {
        Position::new(self.line, self.column)
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SqlError> {
    let mut cur = Cursor {
        src: text,
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '-' && cur.peek_at(1) == Some('-') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }

        let start = cur.pos;
        let start_pos = cur.position();
        let kind = if c.is_alphabetic() || c == '_' {
            while matches!(cur.peek(), Some(c) if c.is_alphanumeric() || c == '_') {
                cur.bump();
            }
            if is_keyword(&text[start..cur.pos]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if c.is_ascii_digit()
            || (c == '.' && matches!(cur.peek_at(1), Some(d) if d.is_ascii_digit()))
        {
            lex_number(&mut cur)?;
            TokenKind::NumberLiteral
        } else if c == '\'' || c == '"' {
            lex_quoted(&mut cur, c, start_pos, "string literal")?;
            TokenKind::StringLiteral
        } else if c == '`' {
            lex_quoted(&mut cur, '`', start_pos, "quoted identifier")?;
            if cur.pos - start == 2 {
                return Err(SqlError::Lex {
                    position: start_pos,
                    message: "empty quoted identifier".into(),
                });
            }
            TokenKind::QuotedIdentifier
        } else if SYMBOLS2.iter().any(|s| text[start..].starts_with(s)) {
            cur.bump();
            cur.bump();
            TokenKind::Symbol
        } else if SYMBOLS1.contains(c) {
            cur.bump();
            TokenKind::Symbol
        } else {
            return Err(SqlError::Lex {
                position: start_pos,
                message: format!("illegal character {c:?}"),
            });
        };

        tokens.push(Token {
            kind,
            text: text[start..cur.pos].to_string(),
            line: start_pos.line,
            column: start_pos.column,
            span: start..cur.pos,
        });
    }
    Ok(tokens)
}

fn lex_number(cur: &mut Cursor<'_>) -> Result<(), SqlError> {
    while matches!(cur.peek(), Some(d) if d.is_ascii_digit()) {
        cur.bump();
    }
    if cur.peek() == Some('.') {
        cur.bump();
        while matches!(cur.peek(), Some(d) if d.is_ascii_digit()) {
            cur.bump();
        }
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let exp_pos = cur.position();
        cur.bump();
        if matches!(cur.peek(), Some('+' | '-')) {
            cur.bump();
        }
        if !matches!(cur.peek(), Some(d) if d.is_ascii_digit()) {
            return Err(SqlError::Lex {
                position: exp_pos,
                message: "malformed exponent in number literal".into(),
            });
        }
        while matches!(cur.peek(), Some(d) if d.is_ascii_digit()) {
            cur.bump();
        }
    }
    if matches!(cur.peek(), Some(c) if c.is_alphabetic() || c == '_') {
        return Err(SqlError::Lex {
            position: cur.position(),
            message: "identifier cannot start with a digit".into(),
        });
    }
    Ok(())
}

fn lex_quoted(
    cur: &mut Cursor<'_>,
    quote: char,
    start: Position,
    what: &str,
) -> Result<(), SqlError> {
    cur.bump();
    loop {
        match cur.bump() {
            None => {
                return Err(SqlError::Lex {
                    position: start,
                    message: format!("unterminated {what}"),
                })
            }
            Some(c) if c == quote => {
                // doubled quote is an escape
                if cur.peek() == Some(quote) {
                    cur.bump();
                } else {
                    return Ok(());
                }
            }
            Some(_) => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(TokenKind, String)> {
        tokenize(text)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn select_star() {
        assert_eq!(
            kinds("SELECT *"),
            vec![
                (TokenKind::Keyword, "SELECT".into()),
                (TokenKind::Symbol, "*".into())
            ]
        );
    }

    #[test]
    fn coalesce_call() {
        use TokenKind::*;
        assert_eq!(
            kinds("COALESCE(age, 50)"),
            vec![
                (Identifier, "COALESCE".into()),
                (Symbol, "(".into()),
                (Identifier, "age".into()),
                (Symbol, ",".into()),
                (NumberLiteral, "50".into()),
                (Symbol, ")".into()),
            ]
        );
    }

    #[test]
    fn unterminated_string() {
        let err = tokenize("'unterminated").unwrap_err();
        match err {
            SqlError::Lex { position, .. } => assert_eq!(position, Position::new(1, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn illegal_character_position() {
        let err = tokenize("SELECT\n  a # b").unwrap_err();
        assert_eq!(err.position(), Position::new(2, 5));
    }

    #[test]
    fn comments_skipped_and_positions_tracked() {
        let toks = tokenize("-- header\nSELECT a -- trailing\nFROM t").unwrap();
        let texts: Vec<_> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["SELECT", "a", "FROM", "t"]);
        assert_eq!((toks[2].line, toks[2].column), (3, 1));
    }

    #[test]
    fn keywords_case_insensitive_identifiers_preserved() {
        let toks = tokenize("select Foo FROM `My Table`").unwrap();
        assert!(toks[0].is_keyword("SELECT"));
        assert_eq!(toks[1].ident_value().unwrap(), "Foo");
        assert_eq!(toks[3].kind, TokenKind::QuotedIdentifier);
        assert_eq!(toks[3].ident_value().unwrap(), "My Table");
    }

    #[test]
    fn escapes_and_numbers() {
        let toks = tokenize("'it''s' 1.5e-3 .25 <> <=").unwrap();
        assert_eq!(toks[0].string_value().unwrap(), "it's");
        assert_eq!(toks[1].text, "1.5e-3");
        assert_eq!(toks[2].text, ".25");
        assert!(toks[3].is_symbol("<>"));
        assert!(toks[4].is_symbol("<="));
    }

    #[test]
    fn lossless_without_comments() {
        let src = "SELECT  a,\n\tCASE WHEN g = 'M' THEN 1 ELSE 0 END AS b FROM `p.d.t` ;";
        let toks = tokenize(src).unwrap();
        let mut rebuilt = String::new();
        let mut last = 0;
        for t in &toks {
            let gap = &src[last..t.span.start];
            assert!(gap.chars().all(char::is_whitespace));
            rebuilt.push_str(gap);
            assert_eq!(&src[t.span.clone()], t.text);
            rebuilt.push_str(&t.text);
            last = t.span.end;
        }
        rebuilt.push_str(&src[last..]);
        assert_eq!(rebuilt, src);
    }
}
