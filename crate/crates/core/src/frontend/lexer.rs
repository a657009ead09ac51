//! Hand-written scanner for MiniC.

use super::token::{is_keyword, SourceSpan, Token, TokenKind};
use crate::error::LexError;

/// Longest-match order matters: three/two-char spellings come first.
const SYMBOLS: &[(&str, TokenKind)] = &[
    ("::", TokenKind::Punctuation),
    ("+=", TokenKind::Operator),
    ("-=", TokenKind::Operator),
    ("*=", TokenKind::Operator),
    ("/=", TokenKind::Operator),
    ("%=", TokenKind::Operator),
    ("++", TokenKind::Operator),
    ("--", TokenKind::Operator),
    ("<=", TokenKind::Operator),
    (">=", TokenKind::Operator),
    ("==", TokenKind::Operator),
    ("!=", TokenKind::Operator),
    ("&&", TokenKind::Operator),
    ("||", TokenKind::Operator),
    ("=", TokenKind::Operator),
    ("+", TokenKind::Operator),
    ("-", TokenKind::Operator),
    ("*", TokenKind::Operator),
    ("/", TokenKind::Operator),
    ("%", TokenKind::Operator),
    ("<", TokenKind::Operator),
    (">", TokenKind::Operator),
    ("!", TokenKind::Operator),
    ("(", TokenKind::Punctuation),
    (")", TokenKind::Punctuation),
    ("{", TokenKind::Punctuation),
    ("}", TokenKind::Punctuation),
    ("[", TokenKind::Punctuation),
    ("]", TokenKind::Punctuation),
    (";", TokenKind::Punctuation),
    (",", TokenKind::Punctuation),
    (":", TokenKind::Punctuation),
    (".", TokenKind::Punctuation),
];

struct Cursor<'a> {
    file: &'a str,
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c))
    }

    fn span_from(&self, line: u32, col: u32, end_line: u32, end_col: u32) -> SourceSpan {
        SourceSpan::new(self.file, line, col, end_line, end_col)
    }

    fn error(&self, line: u32, col: u32, message: impl Into<String>) -> LexError {
        LexError {
            span: self.span_from(line, col, line, col),
            message: message.into(),
        }
    }
}

/// Tokenize `source`, attributing spans to `file`.
///
/// Whitespace and both comment styles are dropped.
pub fn tokenize_file(file: &str, source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        file,
        chars: source.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek(0) {
        let (line, col) = (cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if cur.starts_with("//") {
            while let Some(c) = cur.peek(0) {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if cur.starts_with("/*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    break;
                }
                if cur.bump().is_none() {
                    return Err(cur.error(line, col, "unterminated block comment"));
                }
            }
            continue;
        }

        let mut text = String::new();
        let kind;
        if c.is_ascii_alphabetic() || c == '_' {
            while let Some(c) = cur.peek(0).filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                text.push(c);
                cur.bump();
            }
            kind = if is_keyword(&text) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
        } else if c.is_ascii_digit() {
            while let Some(c) = cur.peek(0).filter(char::is_ascii_digit) {
                text.push(c);
                cur.bump();
            }
            if cur.peek(0) == Some('.') && cur.peek(1).is_some_and(|c| c.is_ascii_digit()) {
                text.push('.');
                cur.bump();
                while let Some(c) = cur.peek(0).filter(char::is_ascii_digit) {
                    text.push(c);
                    cur.bump();
                }
                kind = TokenKind::FloatLiteral;
            } else {
                kind = TokenKind::IntLiteral;
            }
            if cur.peek(0).is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
                return Err(cur.error(cur.line, cur.col, "malformed number literal"));
            }
        } else if c == '"' {
            text.push('"');
            cur.bump();
            loop {
                match cur.peek(0) {
                    None | Some('\n') => {
                        return Err(cur.error(line, col, "unterminated string literal"));
                    }
                    Some('\\') => {
                        text.push('\\');
                        cur.bump();
                        match cur.bump() {
                            Some(e) if e != '\n' => text.push(e),
                            _ => return Err(cur.error(line, col, "unterminated string literal")),
                        }
                    }
                    Some('"') => {
                        text.push('"');
                        cur.bump();
                        break;
                    }
                    Some(c) => {
                        text.push(c);
                        cur.bump();
                    }
                }
            }
            kind = TokenKind::StringLiteral;
        } else if let Some((sym, k)) = SYMBOLS.iter().find(|(s, _)| cur.starts_with(s)) {
            for _ in 0..sym.chars().count() {
                cur.bump();
            }
            text.push_str(sym);
            kind = *k;
        } else {
            return Err(cur.error(line, col, format!("illegal character `{c}`")));
        }

        // `cur.col` is one past the last character of this token.
        let span = cur.span_from(line, col, cur.line, cur.col - 1);
        tokens.push(Token { kind, text, span });
    }
    Ok(tokens)
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    tokenize_file("<input>", source)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src).unwrap().into_iter().map(|t| (t.kind, t.text)).collect()
    }

    #[test]
    fn minimal_statement() {
        assert_eq!(
            kinds("a=1;"),
            vec![
                (TokenKind::Identifier, "a".into()),
                (TokenKind::Operator, "=".into()),
                (TokenKind::IntLiteral, "1".into()),
                (TokenKind::Punctuation, ";".into()),
            ]
        );
    }

    #[test]
    fn square_assignment_has_one_multiplication() {
        let toks = tokenize("square=userInput*userInput;").unwrap();
        assert_eq!(toks.len(), 6);
        assert_eq!(toks.iter().filter(|t| t.is_op("*")).count(), 1);
    }

    #[test]
    fn comments_produce_no_tokens() {
        assert_eq!(kinds("/*x*/ y"), vec![(TokenKind::Identifier, "y".into())]);
        assert_eq!(kinds("// all gone\n"), vec![]);
    }

    #[test]
    fn longest_match_and_globals() {
        let texts: Vec<String> = kinds("::x += y++ <= z").into_iter().map(|t| t.1).collect();
        assert_eq!(texts, ["::", "x", "+=", "y", "++", "<=", "z"]);
    }

    #[test]
    fn spans_are_one_based() {
        let toks = tokenize("int\n  abc;").unwrap();
        assert_eq!(toks[1].span, SourceSpan::new("<input>", 2, 3, 2, 5));
    }

    #[test]
    fn literals() {
        assert_eq!(
            kinds("3.25 \"a\\\"b\" true"),
            vec![
                (TokenKind::FloatLiteral, "3.25".into()),
                (TokenKind::StringLiteral, "\"a\\\"b\"".into()),
                (TokenKind::Keyword, "true".into()),
            ]
        );
    }

    #[test]
    fn errors_carry_spans() {
        let e = tokenize("a = 1 @ 2;").unwrap_err();
        assert_eq!((e.span.line_start, e.span.col_start), (1, 7));
        assert!(tokenize("/* open").is_err());
        assert!(tokenize("print(\"open);").is_err());
        assert!(tokenize("12ab").is_err());
    }
}
