//! End-to-end analysis of one program.

use num_rational::Ratio;

use crate::bcs::{decompose, GranuleTree};
use crate::error::AnalysisError;
use crate::frontend::{parse_source, pretty_print, SyntaxTree};
use crate::metrics::{coding_efficiency, cyclomatic, escim, loc, EscimResult, FunctionMetrics, WeightTable};
use crate::scope::{build_scope_tree, resolve_occurrences, ScopeTree};
use crate::sicn::{build_ledger, info_icn, OccurrenceLedger, SiMode};

#[derive(Debug, Clone)]
pub struct Analysis {
    pub file: String,
    pub tree: SyntaxTree,
    pub scopes: ScopeTree,
    pub ledger: OccurrenceLedger,
    pub granules: Vec<GranuleTree>,
    pub mode: SiMode,
    pub weights: WeightTable,
    pub functions: Vec<FunctionMetrics>,
    pub escim: u64,
    pub i_l: u64,
    pub loc: u64,
    pub efficiency: Ratio<u64>,
    pub cyclomatic: u64,
}

/// Parse, resolve and measure `source`.
pub fn analyze_source(
    file: &str,
    source: &str,
    mode: SiMode,
    weights: &WeightTable,
) -> Result<Analysis, AnalysisError> {
    let tree = parse_source(file, source)?;
    analyze_parsed(tree, source, mode, weights)
}

/// Measure an already parsed tree; LOC is taken from its canonical printing.
pub fn analyze_tree(tree: SyntaxTree, mode: SiMode, weights: &WeightTable) -> Result<Analysis, AnalysisError> {
    let text = pretty_print(&tree);
    analyze_parsed(tree, &text, mode, weights)
}

fn analyze_parsed(
    tree: SyntaxTree,
    source: &str,
    mode: SiMode,
    weights: &WeightTable,
) -> Result<Analysis, AnalysisError> {
    let scopes = build_scope_tree(&tree)?;
    let occurrences = resolve_occurrences(&tree, &scopes)?;
    let loc = loc(source)?;
    let ledger = build_ledger(occurrences, &tree, &scopes);
    let granules = decompose(&tree, &scopes);
    let EscimResult { functions, escim } = escim(&granules, &ledger, weights, mode)?;
    let i_l = info_icn(&ledger.whole_program(), &ledger);
    Ok(Analysis {
        file: tree.file.clone(),
        cyclomatic: cyclomatic(&tree),
        tree,
        scopes,
        ledger,
        granules,
        mode,
        weights: weights.clone(),
        functions,
        escim,
        i_l,
        loc,
        efficiency: coding_efficiency(escim, loc),
    })
}

impl Analysis {
    /// ESCIM of the same program under another mode or weight table.
    pub fn escim_with(&self, mode: SiMode, weights: &WeightTable) -> u64 {
        escim(&self.granules, &self.ledger, weights, mode)
            .expect("granules and ledger come from the same tree")
            .escim
    }

    pub fn function(&self, name: &str) -> Option<&FunctionMetrics> {
        self.functions.iter().find(|f| f.name == name)
    }
}
