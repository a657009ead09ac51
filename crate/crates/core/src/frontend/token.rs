use std::fmt;

use serde::Serialize;

/// A 1-based source region. `line_end`/`col_end` point at the last character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line_start: u32,
    pub col_start: u32,
    pub line_end: u32,
    pub col_end: u32,
}

impl SourceSpan {
    pub fn new(file: &str, line_start: u32, col_start: u32, line_end: u32, col_end: u32) -> Self {
        SourceSpan {
            file: file.to_string(),
            line_start,
            col_start,
            line_end,
            col_end,
        }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn join(&self, other: &SourceSpan) -> SourceSpan {
        let (ls, cs) = (self.line_start, self.col_start).min((other.line_start, other.col_start));
        let (le, ce) = (self.line_end, self.col_end).max((other.line_end, other.col_end));
        SourceSpan::new(&self.file, ls, cs, le, ce)
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        (self.line_start, self.col_start) <= (other.line_start, other.col_start)
            && (other.line_end, other.col_end) <= (self.line_end, self.col_end)
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        SourceSpan::new("", 1, 1, 1, 1)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line_start, self.col_start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Identifier,
    IntLiteral,
    FloatLiteral,
    StringLiteral,
    Keyword,
    Operator,
    Punctuation,
}

/// Every operator spelling the lexer produces. `::` and `.` are punctuation.
pub const OPERATORS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "++", "--", "+", "-", "*", "/", "%", "<", ">", "<=", ">=", "==", "!=", "&&",
    "||", "!",
];

pub const KEYWORDS: &[&str] = &[
    "int", "float", "bool", "struct", "if", "else", "switch", "case", "default", "while", "do", "for", "return",
    "break", "continue", "goto", "true", "false",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punctuation, text)
    }

    pub fn is_op(&self, text: &str) -> bool {
        self.is(TokenKind::Operator, text)
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.is(TokenKind::Keyword, text)
    }
}

pub fn is_keyword(text: &str) -> bool {
    KEYWORDS.contains(&text)
}
