//! Splitting scripts into `;`-terminated statements.

use crate::error::Position;

/// One statement's source text and where it starts in the script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptStatement {
    pub text: String,
    pub start: Position,
}

impl ScriptStatement {
    /// True if the text holds nothing but whitespace and comments.
    pub fn is_blank(&self) -> bool {
        matches!(crate::sql::tokenize(&self.text), Ok(t) if t.is_empty())
    }

    /// Maps a position inside `text` to a position in the script.
    pub fn absolute(&self, p: Position) -> Position {
        if p.line <= 1 {
            Position::new(self.start.line, self.start.column + p.column.saturating_sub(1))
        } else {
            Position::new(self.start.line + p.line - 1, p.column)
        }
    }

    /// Script position of the first token, or of the text start.
    pub fn first_token(&self) -> Position {
        match crate::sql::tokenize(&self.text) {
            Ok(t) if !t.is_empty() => self.absolute(Position::new(t[0].line, t[0].column)),
            _ => self.start,
        }
    }
}

/// Splits off every `;`-terminated statement. Semicolons inside quotes and
/// `--` comments do not terminate. Returns the statements (terminator
/// excluded) and the byte offset where the unterminated remainder begins.
pub fn split_terminated(text: &str) -> (Vec<ScriptStatement>, usize) {
    let mut out = Vec::new();
    let mut quote: Option<char> = None;
    let mut in_comment = false;
    let (mut line, mut column) = (1, 1);
    let mut seg_start = 0;
    let mut seg_pos = Position::new(1, 1);
    let mut chars = text.char_indices().peekable();

    while let Some((i, c)) = chars.next() {
        match (quote, in_comment) {
            (_, true) => in_comment = c != '\n',
            (Some(q), _) => {
                if c == q {
                    quote = None;
                }
            }
            (None, false) => match c {
                '\'' | '"' | '`' => quote = Some(c),
                '-' if matches!(chars.peek(), Some((_, '-'))) => in_comment = true,
                ';' => {
                    out.push(ScriptStatement {
                        text: text[seg_start..i].to_string(),
                        start: seg_pos,
                    });
                    seg_start = i + 1;
                    seg_pos = Position::new(line, column + 1);
                }
                _ => {}
            },
        }
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (out, seg_start)
}

/// All statements in a script; a final statement may omit its `;`.
/// Blank statements are dropped.
pub fn split_script(text: &str) -> Vec<ScriptStatement> {
    let (mut stmts, rest) = split_terminated(text);
    if rest < text.len() {
        let (line, column) = position_of(text, rest);
        stmts.push(ScriptStatement {
            text: text[rest..].to_string(),
            start: Position::new(line, column),
        });
    }
    stmts.retain(|s| !s.is_blank());
    stmts
}

fn position_of(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
