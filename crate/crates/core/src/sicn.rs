//! Information counts per variable occurrence.
//!
//! Two counters run side by side over the ordered occurrence list:
//!
//! * **ICN** is keyed by the variable *name*. It ignores scopes, so two
//!   shadowing declarations of `s` share one counter.
//! * **SICN** is keyed by the [`ScopedVariable`](crate::scope::ScopedVariable),
//!   so each declaration has its own counter.
//!
//! An assignment raises the target's counters by one plus the number of
//! operators in the assigning expression (plain `=` excluded). Reads and bare
//! declarations raise nothing but still record the current value.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::frontend::*;
use crate::scope::{OccurrenceRef, Occurrences, Role, ScopeTree, VarId};

/// How a region's scope information is derived from the ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiMode {
    /// Σ_V (max SICN in L − SICN on entry to L): the number of value changes.
    #[default]
    Delta,
    /// Σ_V (max SICN − min SICN) over the occurrences inside L.
    MinMax,
    /// Σ_V max SICN in L: absolute levels.
    Absolute,
}

impl SiMode {
    pub const ALL: [SiMode; 3] = [SiMode::Delta, SiMode::MinMax, SiMode::Absolute];

    pub fn as_str(self) -> &'static str {
        match self {
            SiMode::Delta => "delta",
            SiMode::MinMax => "minmax",
            SiMode::Absolute => "absolute",
        }
    }
}

impl fmt::Display for SiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SiMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "delta" => Ok(SiMode::Delta),
            "minmax" => Ok(SiMode::MinMax),
            "absolute" => Ok(SiMode::Absolute),
            _ => Err(format!("unknown SI mode `{s}` (expected delta, minmax or absolute)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub occurrence: OccurrenceRef,
    pub icn_after: u64,
    pub sicn_after: u64,
    pub delta: u64,
}

/// A set of occurrence ordinals, kept as sorted, disjoint, non-adjacent ranges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Region {
    ranges: Vec<Range<usize>>,
}

impl Region {
    pub fn new(ranges: impl IntoIterator<Item = Range<usize>>) -> Self {
        let mut rs: Vec<Range<usize>> = ranges.into_iter().filter(|r| !r.is_empty()).collect();
        rs.sort_by_key(|r| r.start);
        let mut merged: Vec<Range<usize>> = Vec::with_capacity(rs.len());
        for r in rs {
            match merged.last_mut() {
                Some(last) if r.start <= last.end => last.end = last.end.max(r.end),
                _ => merged.push(r),
            }
        }
        Region { ranges: merged }
    }

    /// One contiguous range of ordinals.
    pub fn span(r: Range<usize>) -> Self {
        Region::new(std::iter::once(r))
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn contains(&self, ordinal: usize) -> bool {
        self.ranges.iter().any(|r| r.contains(&ordinal))
    }
}

#[derive(Debug, Clone)]
pub struct OccurrenceLedger {
    pub entries: Vec<LedgerEntry>,
    by_var: HashMap<VarId, Vec<usize>>,
    by_name: BTreeMap<String, Vec<usize>>,
    var_names: Vec<String>,
    occurrences: Occurrences,
}

/// Count the operators of one expression tree, excluding plain `=`.
pub fn count_operators(e: &Expr) -> u64 {
    let mut n = 0;
    e.walk(&mut |x| {
        if let Some(op) = x.operator() {
            if op != "=" {
                n += 1;
            }
        }
    });
    n
}

/// Root identifier node of an assignable access path.
fn target_root(e: &Expr) -> Option<NodeId> {
    match &e.kind {
        ExprKind::Var(_) | ExprKind::Global(_) => Some(e.meta.id),
        ExprKind::Member { base, .. } | ExprKind::Index { base, .. } => target_root(base),
        _ => None,
    }
}

/// Delta for every assignment-target node, from one expression root.
fn collect_target_deltas(root: &Expr, out: &mut HashMap<NodeId, u64>) {
    let delta = 1 + count_operators(root);
    root.walk(&mut |x| match &x.kind {
        ExprKind::Assign { target, .. }
        | ExprKind::CompoundAssign { target, .. }
        | ExprKind::Increment(target)
        | ExprKind::Decrement(target) => {
            if let Some(n) = target_root(target) {
                out.insert(n, delta);
            }
        }
        _ => {}
    });
}

fn collect_stmt_deltas(s: &Stmt, out: &mut HashMap<NodeId, u64>) {
    if let StmtKind::Decl(d) = &s.kind {
        if let Some(init) = &d.init {
            let ops: u64 = init.exprs().iter().map(count_operators).sum();
            out.insert(s.meta.id, 1 + ops);
        }
    }
    for e in s.own_exprs() {
        collect_target_deltas(e, out);
    }
    for c in s.child_stmts() {
        collect_stmt_deltas(c, out);
    }
}

/// Build the ledger: one entry per occurrence, in ordinal order.
pub fn build_ledger(occurrences: Occurrences, tree: &SyntaxTree, scopes: &ScopeTree) -> OccurrenceLedger {
    let mut deltas = HashMap::new();
    for item in &tree.items {
        match item {
            Item::Global(s) => collect_stmt_deltas(s, &mut deltas),
            Item::Function(f) => {
                for p in &f.params {
                    deltas.insert(p.meta.id, 1);
                }
                f.body.stmts.iter().for_each(|s| collect_stmt_deltas(s, &mut deltas));
            }
            Item::Record(_) => {}
        }
    }

    let var_names: Vec<String> = scopes.variables.iter().map(|v| v.name.clone()).collect();
    let mut sicn: HashMap<VarId, u64> = HashMap::new();
    let mut icn: HashMap<&str, u64> = HashMap::new();
    let mut by_var: HashMap<VarId, Vec<usize>> = HashMap::new();
    let mut by_name: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut entries = Vec::with_capacity(occurrences.len());

    for (i, occ) in occurrences.refs.iter().enumerate() {
        let delta = match occ.role {
            Role::AssignmentTarget => deltas.get(&occ.node).copied().unwrap_or(1),
            Role::Declaration | Role::Read => 0,
        };
        let name = var_names[occ.variable.0].as_str();
        let s = sicn.entry(occ.variable).or_insert(0);
        *s += delta;
        let c = icn.entry(name).or_insert(0);
        *c += delta;
        entries.push(LedgerEntry {
            occurrence: occ.clone(),
            icn_after: *c,
            sicn_after: *s,
            delta,
        });
        by_var.entry(occ.variable).or_default().push(i);
        by_name.entry(name.to_string()).or_default().push(i);
    }

    OccurrenceLedger {
        entries,
        by_var,
        by_name,
        var_names,
        occurrences,
    }
}

impl OccurrenceLedger {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn occurrences(&self) -> &Occurrences {
        &self.occurrences
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.var_names[v.0]
    }

    /// Ordinals of `v`'s occurrences, ascending.
    pub fn occurrences_of(&self, v: VarId) -> &[usize] {
        self.by_var.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn occurrences_named(&self, name: &str) -> &[usize] {
        self.by_name.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn whole_program(&self) -> Region {
        Region::span(0..self.entries.len())
    }

    /// Region covering the given statements (nested statements included).
    pub fn stmt_region(&self, stmts: &[NodeId]) -> Option<Region> {
        let mut ranges = Vec::with_capacity(stmts.len());
        for s in stmts {
            ranges.push(self.occurrences.stmt_range(*s)?);
        }
        Some(Region::new(ranges))
    }

    /// SICN of a record variable's member (or of the whole variable for
    /// `None`) after `ordinal`: the deltas of assignments through that member.
    pub fn member_sicn(&self, v: VarId, member: Option<&str>, ordinal: usize) -> u64 {
        self.occurrences_of(v)
            .iter()
            .take_while(|&&i| i <= ordinal)
            .map(|&i| &self.entries[i])
            .filter(|e| e.occurrence.member.as_deref() == member)
            .map(|e| e.delta)
            .sum()
    }

    /// SICN of `v` just before `ordinal`; 0 if it has not occurred yet.
    pub fn sicn_before(&self, v: VarId, ordinal: usize) -> u64 {
        let occ = self.occurrences_of(v);
        let k = occ.partition_point(|&i| i < ordinal);
        if k == 0 {
            0
        } else {
            self.entries[occ[k - 1]].sicn_after
        }
    }

    /// Per variable, (min, max) SICN over its occurrences in one ordinal range.
    fn extremes_in(&self, range: Range<usize>) -> BTreeMap<VarId, (u64, u64)> {
        let mut m: BTreeMap<VarId, (u64, u64)> = BTreeMap::new();
        for e in &self.entries[range] {
            let v = e.sicn_after;
            m.entry(e.occurrence.variable)
                .and_modify(|(lo, hi)| {
                    *lo = (*lo).min(v);
                    *hi = (*hi).max(v);
                })
                .or_insert((v, v));
        }
        m
    }
}

/// Highest SICN of `v`'s occurrences inside `region`; 0 without occurrences.
pub fn sicn_max(v: VarId, region: &Region, ledger: &OccurrenceLedger) -> u64 {
    ledger
        .occurrences_of(v)
        .iter()
        .filter(|&&i| region.contains(i))
        .map(|&i| ledger.entries[i].sicn_after)
        .max()
        .unwrap_or(0)
}

/// Lowest SICN of `v`'s occurrences inside `region`; 0 without occurrences.
pub fn sicn_min(v: VarId, region: &Region, ledger: &OccurrenceLedger) -> u64 {
    ledger
        .occurrences_of(v)
        .iter()
        .filter(|&&i| region.contains(i))
        .map(|&i| ledger.entries[i].sicn_after)
        .min()
        .unwrap_or(0)
}

/// Highest name-keyed ICN of occurrences of `name` inside `region`.
pub fn icn_max(name: &str, region: &Region, ledger: &OccurrenceLedger) -> u64 {
    ledger
        .occurrences_named(name)
        .iter()
        .filter(|&&i| region.contains(i))
        .map(|&i| ledger.entries[i].icn_after)
        .max()
        .unwrap_or(0)
}

/// Scope information of a region.
///
/// A region made of several separated ordinal ranges is evaluated range by
/// range and summed.
pub fn si(region: &Region, ledger: &OccurrenceLedger, mode: SiMode) -> u64 {
    region
        .ranges()
        .iter()
        .map(|r| {
            ledger
                .extremes_in(r.clone())
                .into_iter()
                .map(|(v, (lo, hi))| match mode {
                    SiMode::Delta => hi - ledger.sicn_before(v, r.start),
                    SiMode::MinMax => hi - lo,
                    SiMode::Absolute => hi,
                })
                .sum::<u64>()
        })
        .sum()
}

/// The scope-blind baseline I(L): Σ over names of the highest ICN in L.
pub fn info_icn(region: &Region, ledger: &OccurrenceLedger) -> u64 {
    region
        .ranges()
        .iter()
        .map(|r| {
            let mut best: BTreeMap<&str, u64> = BTreeMap::new();
            for e in &ledger.entries[r.clone()] {
                let name = ledger.var_name(e.occurrence.variable);
                let slot = best.entry(name).or_insert(0);
                *slot = (*slot).max(e.icn_after);
            }
            best.values().sum::<u64>()
        })
        .sum()
}
