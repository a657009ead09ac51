//! MiniC front end: tokens, syntax tree, parser and canonical printer.

pub mod ast;
mod lexer;
mod parser;
mod printer;
mod token;

pub use ast::*;
pub use lexer::{tokenize, tokenize_file};
pub use parser::parse;
pub use printer::{pretty_print, print_expr};
pub use token::{SourceSpan, Token, TokenKind, KEYWORDS, OPERATORS};

use crate::error::AnalysisError;

/// Tokenize and parse in one step.
pub fn parse_source(file: &str, source: &str) -> Result<SyntaxTree, AnalysisError> {
    let tokens = tokenize_file(file, source)?;
    let mut tree = parse(&tokens)?;
    tree.file = file.to_string();
    Ok(tree)
}
