use serde::Serialize;
use thiserror::Error;

use crate::frontend::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct LexError {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message} (expected one of: {})", expected.join(", "))]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("{span}: `{name}` is already declared in this scope")]
    DuplicateDeclaration { name: String, span: SourceSpan },
    #[error("{span}: no declaration of `{name}` is visible here")]
    UnresolvedName { name: String, span: SourceSpan },
    #[error("{span}: `{base}` has no member `{member}`")]
    UnresolvedMember {
        base: String,
        member: String,
        span: SourceSpan,
    },
}

impl ResolveError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ResolveError::DuplicateDeclaration { span, .. }
            | ResolveError::UnresolvedName { span, .. }
            | ResolveError::UnresolvedMember { span, .. } => span,
        }
    }
}

/// Anything that can stop the source → report pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("lex error: {0}")]
    Lex(#[from] LexError),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("resolve error: {0}")]
    Resolve(#[from] ResolveError),
    #[error("program has no lines of code")]
    EmptyProgram,
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
}

/// Machine-readable form of an [`AnalysisError`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl AnalysisError {
    pub fn diagnostic(&self) -> Diagnostic {
        let (kind, message, span) = match self {
            AnalysisError::Lex(e) => ("lex", e.message.clone(), Some(e.span.clone())),
            AnalysisError::Parse(e) => ("parse", e.to_string(), Some(e.span.clone())),
            AnalysisError::Resolve(e) => ("resolve", e.to_string(), Some(e.span().clone())),
            AnalysisError::EmptyProgram => ("empty-program", self.to_string(), None),
            AnalysisError::InconsistentInput(m) => ("inconsistent-input", m.clone(), None),
        };
        Diagnostic { kind, message, span }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ErmSyntaxError {
    pub line: usize,
    pub message: String,
}

/// Failures of the program transformations used by the property checker.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("cannot compose programs: {0}")]
    Compose(String),
    #[error("rename collision: {0}")]
    RenameCollision(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("weight table: {0}")]
pub struct WeightConfigError(pub String);
