//! Serializable reports: per file, per corpus, and the occurrence ledger dump.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::Analysis;
use crate::error::{AnalysisError, Diagnostic};
use crate::metrics::{coding_efficiency, format_ratio, FunctionMetrics};
use crate::scope::Role;
use crate::sicn::SiMode;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub ordinal: usize,
    pub variable: String,
    pub scope: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member: Option<String>,
    pub role: Role,
    pub delta: u64,
    pub icn_after: u64,
    pub sicn_after: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileReport {
    pub file: String,
    pub si_mode: SiMode,
    pub loc: Option<u64>,
    pub i_l: Option<u64>,
    pub escim: Option<u64>,
    pub efficiency: Option<String>,
    pub cyclomatic: Option<u64>,
    pub functions: Vec<FunctionMetrics>,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<Vec<LedgerRow>>,
}

pub fn ledger_rows(a: &Analysis) -> Vec<LedgerRow> {
    a.ledger
        .entries
        .iter()
        .map(|e| {
            let v = a.scopes.variable(e.occurrence.variable);
            LedgerRow {
                ordinal: e.occurrence.ordinal,
                variable: v.name.clone(),
                scope: v.scope.0,
                member: e.occurrence.member.clone(),
                role: e.occurrence.role,
                delta: e.delta,
                icn_after: e.icn_after,
                sicn_after: e.sicn_after,
            }
        })
        .collect()
}

impl FileReport {
    pub fn from_analysis(a: &Analysis, with_ledger: bool) -> Self {
        FileReport {
            file: a.file.clone(),
            si_mode: a.mode,
            loc: Some(a.loc),
            i_l: Some(a.i_l),
            escim: Some(a.escim),
            efficiency: Some(format_ratio(&a.efficiency)),
            cyclomatic: Some(a.cyclomatic),
            functions: a.functions.clone(),
            diagnostics: Vec::new(),
            ledger: with_ledger.then(|| ledger_rows(a)),
        }
    }

    pub fn from_error(file: &str, mode: SiMode, e: &AnalysisError) -> Self {
        FileReport {
            file: file.to_string(),
            si_mode: mode,
            loc: None,
            i_l: None,
            escim: None,
            efficiency: None,
            cyclomatic: None,
            functions: Vec::new(),
            diagnostics: vec![e.diagnostic()],
            ledger: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusTotals {
    pub files: usize,
    pub failed: usize,
    pub loc: u64,
    pub i_l: u64,
    pub escim: u64,
    pub efficiency: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub files: Vec<FileReport>,
    pub totals: CorpusTotals,
}

impl CorpusReport {
    /// Reports are sorted by file name.
    pub fn new(mut files: Vec<FileReport>) -> Self {
        files.sort_by(|a, b| a.file.cmp(&b.file));
        let ok = files.iter().filter(|f| f.is_ok());
        let loc: u64 = ok.clone().filter_map(|f| f.loc).sum();
        let escim: u64 = ok.clone().filter_map(|f| f.escim).sum();
        let totals = CorpusTotals {
            files: files.len(),
            failed: files.iter().filter(|f| !f.is_ok()).count(),
            loc,
            i_l: ok.filter_map(|f| f.i_l).sum(),
            escim,
            efficiency: (loc > 0).then(|| format_ratio(&coding_efficiency(escim, loc))),
        };
        CorpusReport { files, totals }
    }
}

/// Which sections a text report shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emit {
    pub metrics: bool,
    pub erm: bool,
    pub ledger: bool,
    pub granules: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Emit {
            metrics: true,
            erm: false,
            ledger: false,
            granules: true,
        }
    }
}

impl Emit {
    /// Parse a comma-separated list of `metrics`, `erm`, `ledger`, `granules`.
    pub fn parse(list: &str) -> Result<Self, String> {
        let mut e = Emit {
            metrics: false,
            erm: false,
            ledger: false,
            granules: false,
        };
        for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "metrics" => e.metrics = true,
                "erm" => e.erm = true,
                "ledger" => e.ledger = true,
                "granules" => e.granules = true,
                other => return Err(format!("unknown emit section `{other}`")),
            }
        }
        Ok(e)
    }
}

fn opt(v: &Option<impl ToString>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

pub fn render_text(r: &FileReport, emit: Emit) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", r.file);
    for d in &r.diagnostics {
        match &d.span {
            Some(sp) => {
                let _ = writeln!(s, "  error[{}] {}: {}", d.kind, sp, d.message);
            }
            None => {
                let _ = writeln!(s, "  error[{}]: {}", d.kind, d.message);
            }
        }
    }
    if !r.is_ok() {
        return s;
    }
    if emit.metrics {
        let _ = writeln!(
            s,
            "  si-mode {}  loc {}  I(L) {}  ESCIM {}  E {}  cyclomatic {}",
            r.si_mode,
            opt(&r.loc),
            opt(&r.i_l),
            opt(&r.escim),
            opt(&r.efficiency),
            opt(&r.cyclomatic)
        );
    }
    for f in &r.functions {
        if emit.metrics || emit.granules || emit.erm {
            let rec = if f.recursive { "  recursive" } else { "" };
            let _ = writeln!(s, "  fn {}  ESCIM {}  SI {}{}", f.name, f.escim, f.si_total, rec);
        }
        if emit.granules && !f.granules.is_empty() {
            let _ = writeln!(
                s,
                "    {:<14} {:<9} {:>6} {:>5} {:>8} {:>6}",
                "granule", "kind", "weight", "si", "ancestor", "term"
            );
            for g in &f.granules {
                let _ = writeln!(
                    s,
                    "    {:<14} {:<9} {:>6} {:>5} {:>8} {:>6}",
                    g.label.to_string(),
                    g.kind.to_string(),
                    g.weight,
                    g.si,
                    g.ancestor_product,
                    g.term
                );
            }
        }
        if emit.erm {
            for fact in &f.erm {
                let _ = writeln!(s, "    {fact}");
            }
        }
    }
    if emit.ledger {
        if let Some(rows) = &r.ledger {
            let _ = writeln!(
                s,
                "  {:>5} {:<16} {:>5} {:<18} {:>5} {:>5} {:>5}",
                "ord", "variable", "scope", "role", "delta", "icn", "sicn"
            );
            for row in rows {
                let name = match &row.member {
                    Some(m) => format!("{}.{}", row.variable, m),
                    None => row.variable.clone(),
                };
                let role = serde_json::to_value(row.role)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default();
                let _ = writeln!(
                    s,
                    "  {:>5} {:<16} {:>5} {:<18} {:>5} {:>5} {:>5}",
                    row.ordinal, name, row.scope, role, row.delta, row.icn_after, row.sicn_after
                );
            }
        }
    }
    s
}

pub fn render_corpus_text(c: &CorpusReport, emit: Emit) -> String {
    let mut s = String::new();
    for f in &c.files {
        s.push_str(&render_text(f, emit));
    }
    let t = &c.totals;
    let _ = writeln!(
        s,
        "total: {} files ({} failed)  loc {}  I(L) {}  ESCIM {}  E {}",
        t.files,
        t.failed,
        t.loc,
        t.i_l,
        t.escim,
        opt(&t.efficiency)
    );
    s
}
