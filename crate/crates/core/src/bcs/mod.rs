//! Basic control structures: classification, granule hierarchy, ERM facts
//! and recursion detection.

mod decompose;
mod erm;
mod recursion;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::frontend::{Stmt, StmtKind};

pub use decompose::{decompose, decompose_function, leaf_region, Granule, GranuleTree, Label, Relation};
pub use erm::{parse_erm, render_erm, serialize_erm, ErmExpression, ErmFact, ErmRelation};
pub use recursion::{call_graph, detect_recursion};

/// The BCS kinds of the weight table. Names match the weight config keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BcsKind {
    #[serde(rename = "linear")]
    Linear,
    #[serde(rename = "goto")]
    Goto,
    #[serde(rename = "if")]
    IfBranch,
    #[serde(rename = "case")]
    CaseBranch,
    #[serde(rename = "while")]
    WhileLoop,
    #[serde(rename = "do_while")]
    DoWhileLoop,
    #[serde(rename = "for")]
    ForLoop,
    #[serde(rename = "call")]
    FunctionCall,
    #[serde(rename = "recursion")]
    Recursion,
}

impl BcsKind {
    pub const ALL: [BcsKind; 9] = [
        BcsKind::Linear,
        BcsKind::Goto,
        BcsKind::IfBranch,
        BcsKind::CaseBranch,
        BcsKind::WhileLoop,
        BcsKind::DoWhileLoop,
        BcsKind::ForLoop,
        BcsKind::FunctionCall,
        BcsKind::Recursion,
    ];

    pub fn key(self) -> &'static str {
        match self {
            BcsKind::Linear => "linear",
            BcsKind::Goto => "goto",
            BcsKind::IfBranch => "if",
            BcsKind::CaseBranch => "case",
            BcsKind::WhileLoop => "while",
            BcsKind::DoWhileLoop => "do_while",
            BcsKind::ForLoop => "for",
            BcsKind::FunctionCall => "call",
            BcsKind::Recursion => "recursion",
        }
    }

    pub fn is_loop(self) -> bool {
        matches!(self, BcsKind::WhileLoop | BcsKind::DoWhileLoop | BcsKind::ForLoop)
    }
}

impl fmt::Display for BcsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for BcsKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BcsKind::ALL
            .into_iter()
            .find(|k| k.key() == s)
            .ok_or_else(|| format!("unknown BCS kind `{s}`"))
    }
}

/// Table 1 classification of a single statement. Blocks and labels are
/// transparent for decomposition and classify as linear here.
pub fn classify_bcs(stmt: &Stmt) -> BcsKind {
    match &stmt.kind {
        StmtKind::Goto(_) => BcsKind::Goto,
        StmtKind::If { .. } => BcsKind::IfBranch,
        StmtKind::Switch { .. } => BcsKind::CaseBranch,
        StmtKind::While { .. } => BcsKind::WhileLoop,
        StmtKind::DoWhile { .. } => BcsKind::DoWhileLoop,
        StmtKind::For { .. } => BcsKind::ForLoop,
        StmtKind::Labeled { stmt, .. } => classify_bcs(stmt),
        _ => BcsKind::Linear,
    }
}

/// True for statements that open a granule of their own.
pub fn is_structured(stmt: &Stmt) -> bool {
    matches!(
        stmt.kind,
        StmtKind::If { .. }
            | StmtKind::Switch { .. }
            | StmtKind::While { .. }
            | StmtKind::DoWhile { .. }
            | StmtKind::For { .. }
    )
}
