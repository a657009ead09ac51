//! Cognitive weights, ESCIM, LOC, coding efficiency and cyclomatic complexity.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::Ratio;
use serde::Serialize;

use crate::bcs::{leaf_region, serialize_erm, BcsKind, GranuleTree};
use crate::error::{AnalysisError, WeightConfigError};
use crate::frontend::*;
use crate::sicn::{si, OccurrenceLedger, SiMode};

/// Positive integer weight per BCS kind. The defaults are the usual CFS
/// cognitive weights; goto has no published weight and defaults to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightTable {
    weights: BTreeMap<BcsKind, u64>,
}

impl Default for WeightTable {
    fn default() -> Self {
        let weights = BcsKind::ALL
            .into_iter()
            .map(|k| {
                let w = match k {
                    BcsKind::Linear | BcsKind::Goto => 1,
                    BcsKind::IfBranch | BcsKind::FunctionCall => 2,
                    BcsKind::CaseBranch
                    | BcsKind::WhileLoop
                    | BcsKind::DoWhileLoop
                    | BcsKind::ForLoop
                    | BcsKind::Recursion => 3,
                };
                (k, w)
            })
            .collect();
        WeightTable { weights }
    }
}

impl WeightTable {
    pub fn get(&self, k: BcsKind) -> u64 {
        self.weights[&k]
    }

    pub fn with(mut self, k: BcsKind, w: u64) -> Self {
        assert!(w >= 1, "weights are positive");
        self.weights.insert(k, w);
        self
    }

    /// Parse a JSON object of kind keys to weights. Missing keys keep their
    /// defaults; unknown keys and weights below 1 are rejected.
    pub fn from_json(text: &str) -> Result<Self, WeightConfigError> {
        let raw: BTreeMap<String, serde_json::Value> =
            serde_json::from_str(text).map_err(|e| WeightConfigError(e.to_string()))?;
        let mut t = WeightTable::default();
        for (key, v) in raw {
            let kind: BcsKind = key.parse().map_err(WeightConfigError)?;
            let w = v
                .as_u64()
                .filter(|w| *w >= 1)
                .ok_or_else(|| WeightConfigError(format!("`{key}` must be an integer ≥ 1, found {v}")))?;
            t.weights.insert(kind, w);
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self, WeightConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| WeightConfigError(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GranuleMetrics {
    pub label: String,
    pub kind: BcsKind,
    /// For leaves: the linear weight times the call and goto factors.
    pub weight: u64,
    pub si: u64,
    pub ancestor_product: u64,
    pub term: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionMetrics {
    pub name: String,
    pub recursive: bool,
    pub escim: u64,
    pub si_total: u64,
    pub granules: Vec<GranuleMetrics>,
    pub erm: Vec<String>,
}

/// Per-function ESCIM breakdown for one SI mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscimResult {
    pub functions: Vec<FunctionMetrics>,
    pub escim: u64,
}

fn pow(base: u64, exp: u32) -> u64 {
    base.saturating_pow(exp)
}

/// ESCIM = Σ over leaves of SI × leaf weight × product of ancestor weights,
/// with recursive functions multiplied by the recursion weight.
pub fn escim(
    trees: &[GranuleTree],
    ledger: &OccurrenceLedger,
    weights: &WeightTable,
    mode: SiMode,
) -> Result<EscimResult, AnalysisError> {
    let mut functions = Vec::with_capacity(trees.len());
    for t in trees {
        let mut rows = Vec::new();
        let mut err = None;
        let mut sum = 0u64;
        let mut si_total = 0u64;
        t.walk(|g, anc| {
            if err.is_some() {
                return;
            }
            let ancestor_product = anc.iter().fold(1u64, |p, a| p.saturating_mul(weights.get(a.kind)));
            let (weight, s) = if g.is_leaf() {
                let region = match leaf_region(t, g, ledger) {
                    Ok(r) => r,
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                };
                let w = weights
                    .get(BcsKind::Linear)
                    .saturating_mul(pow(weights.get(BcsKind::FunctionCall), g.calls))
                    .saturating_mul(pow(weights.get(BcsKind::Goto), g.gotos));
                (w, si(&region, ledger, mode))
            } else {
                (weights.get(g.kind), 0)
            };
            let term = if g.is_leaf() {
                s.saturating_mul(weight).saturating_mul(ancestor_product)
            } else {
                0
            };
            sum = sum.saturating_add(term);
            si_total += s;
            rows.push(GranuleMetrics {
                label: g.label.to_string(),
                kind: g.kind,
                weight,
                si: s,
                ancestor_product,
                term,
            });
        });
        if let Some(e) = err {
            return Err(e);
        }
        if t.recursive {
            sum = sum.saturating_mul(weights.get(BcsKind::Recursion));
        }
        functions.push(FunctionMetrics {
            name: t.function.clone(),
            recursive: t.recursive,
            escim: sum,
            si_total,
            granules: rows,
            erm: serialize_erm(t).lines(),
        });
    }
    let escim = functions.iter().fold(0u64, |a, f| a.saturating_add(f.escim));
    Ok(EscimResult { functions, escim })
}

/// Lines that hold anything besides whitespace and comments.
pub fn loc(source: &str) -> Result<u64, AnalysisError> {
    let mut count = 0;
    let mut in_block = false;
    for line in source.lines() {
        let b = line.as_bytes();
        let mut i = 0;
        let mut code = false;
        let mut in_str = false;
        while i < b.len() {
            if in_block {
                if b[i..].starts_with(b"*/") {
                    in_block = false;
                    i += 2;
                } else {
                    i += 1;
                }
            } else if in_str {
                match b[i] {
                    b'\\' => i += 2,
                    b'"' => {
                        in_str = false;
                        i += 1;
                    }
                    _ => i += 1,
                }
            } else if b[i..].starts_with(b"//") {
                break;
            } else if b[i..].starts_with(b"/*") {
                in_block = true;
                i += 2;
            } else {
                if b[i] == b'"' {
                    in_str = true;
                }
                code |= !b[i].is_ascii_whitespace();
                i += 1;
            }
        }
        if code {
            count += 1;
        }
    }
    if count == 0 {
        Err(AnalysisError::EmptyProgram)
    } else {
        Ok(count)
    }
}

pub fn coding_efficiency(escim: u64, loc: u64) -> Ratio<u64> {
    Ratio::new(escim, loc)
}

/// `n/d`, or `n` for whole numbers.
pub fn format_ratio(r: &Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn decisions_expr(e: &Expr) -> u64 {
    let mut n = 0;
    e.walk(&mut |x| {
        if let ExprKind::Binary {
            op: BinaryOp::And | BinaryOp::Or,
            ..
        } = &x.kind
        {
            n += 1;
        }
    });
    n
}

fn decisions_stmt(s: &Stmt) -> u64 {
    let own = match &s.kind {
        StmtKind::If { .. } | StmtKind::While { .. } | StmtKind::DoWhile { .. } | StmtKind::For { .. } => 1,
        StmtKind::Switch { body, .. } => body
            .arms
            .iter()
            .filter(|a| matches!(a.label, CaseLabel::Case(_)))
            .count() as u64,
        _ => 0,
    };
    own + s.own_exprs().into_iter().map(decisions_expr).sum::<u64>()
        + s.child_stmts().into_iter().map(decisions_stmt).sum::<u64>()
}

/// McCabe's number summed over functions: 1 + decision points each.
pub fn cyclomatic(tree: &SyntaxTree) -> u64 {
    tree.functions()
        .map(|f| 1 + f.body.stmts.iter().map(decisions_stmt).sum::<u64>())
        .sum()
}
