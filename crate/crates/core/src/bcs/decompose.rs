//! Hierarchical granule decomposition of function bodies.
//!
//! Maximal runs of simple statements become linear leaves. Every `if`,
//! `switch`, `while`, `do` and `for` becomes a structured granule with one
//! child list per arm (then/else, one per case, one loop body). Blocks and
//! labels are flattened away. A structured granule's header occurrences are
//! charged to the first leaf of its first arm; an empty leaf is created there
//! if the arm is empty or starts with another structure.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{classify_bcs, detect_recursion, is_structured, BcsKind};
use crate::error::AnalysisError;
use crate::frontend::*;
use crate::scope::ScopeTree;
use crate::sicn::{OccurrenceLedger, Region};

/// Position label: `G3` at top level, `G(3,1,2)` below.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub Vec<u32>);

impl Label {
    pub fn child(&self, j: u32) -> Label {
        let mut v = self.0.clone();
        v.push(j);
        Label(v)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [i] => write!(f, "G{i}"),
            parts => {
                let inner: Vec<String> = parts.iter().map(u32::to_string).collect();
                write!(f, "G({})", inner.join(","))
            }
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("malformed granule label `{s}`");
        let rest = s.strip_prefix('G').ok_or_else(bad)?;
        let num = |t: &str| -> Result<u32, String> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<u32>()
                .map_err(|_| bad())
                .and_then(|n| if n == 0 { Err(bad()) } else { Ok(n) })
        };
        if let Some(inner) = rest.strip_prefix('(') {
            let inner = inner.strip_suffix(')').ok_or_else(bad)?;
            let parts = inner.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            if parts.len() < 2 {
                return Err(bad());
            }
            Ok(Label(parts))
        } else {
            Ok(Label(vec![num(rest)?]))
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Sequence,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Granule {
    pub label: Label,
    pub kind: BcsKind,
    /// Leaves: the simple statements of the run. Structured: the statement.
    pub stmts: Vec<NodeId>,
    /// Structured statement whose header this leaf carries.
    pub header: Option<NodeId>,
    /// Leaf carries the function's parameter occurrences.
    pub prologue: bool,
    /// Child lists, one per arm. Empty for leaves.
    pub arms: Vec<Vec<Granule>>,
    pub relation_to_next_sibling: Relation,
    /// Calls to user functions in the leaf and its header.
    pub calls: u32,
    pub gotos: u32,
}

impl Granule {
    pub fn is_leaf(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn children(&self) -> impl Iterator<Item = &Granule> {
        self.arms.iter().flatten()
    }

    /// Pre-order walk with the strict ancestors of each granule.
    pub fn walk<'a>(&'a self, ancestors: &mut Vec<&'a Granule>, f: &mut impl FnMut(&'a Granule, &[&'a Granule])) {
        f(self, ancestors);
        ancestors.push(self);
        for c in self.children() {
            c.walk(ancestors, f);
        }
        ancestors.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GranuleTree {
    pub function: String,
    pub recursive: bool,
    pub param_count: usize,
    pub roots: Vec<Granule>,
}

impl GranuleTree {
    pub fn walk<'a>(&'a self, mut f: impl FnMut(&'a Granule, &[&'a Granule])) {
        let mut anc = Vec::new();
        for g in &self.roots {
            g.walk(&mut anc, &mut f);
        }
    }

    pub fn leaves(&self) -> Vec<&Granule> {
        let mut out = Vec::new();
        self.walk(|g, _| {
            if g.is_leaf() {
                out.push(g)
            }
        });
        out
    }

    pub fn find(&self, label: &str) -> Option<&Granule> {
        let mut hit = None;
        self.walk(|g, _| {
            if hit.is_none() && g.label.to_string() == label {
                hit = Some(g);
            }
        });
        hit
    }
}

fn flatten<'a>(s: &'a Stmt, out: &mut Vec<&'a Stmt>) {
    match &s.kind {
        StmtKind::Block(b) => b.stmts.iter().for_each(|c| flatten(c, out)),
        StmtKind::Labeled { stmt, .. } => flatten(stmt, out),
        _ => out.push(s),
    }
}

fn flatten_all<'a>(stmts: impl IntoIterator<Item = &'a Stmt>) -> Vec<&'a Stmt> {
    let mut out = Vec::new();
    for s in stmts {
        flatten(s, &mut out);
    }
    out
}

/// Expressions of a structured statement's header, the for-init declaration
/// included.
fn header_exprs(s: &Stmt) -> Vec<&Expr> {
    let mut v = Vec::new();
    if let StmtKind::For {
        init: ForInit::Decl(d), ..
    } = &s.kind
    {
        v.extend(d.own_exprs());
    }
    v.extend(s.own_exprs());
    v
}

struct Builder<'a> {
    scopes: &'a ScopeTree,
}

impl Builder<'_> {
    fn count_calls(&self, exprs: &[&Expr]) -> u32 {
        let mut n = 0;
        for e in exprs {
            e.walk(&mut |x| {
                if let ExprKind::Call { callee, .. } = &x.kind {
                    if self.scopes.is_user_function(callee) {
                        n += 1;
                    }
                }
            });
        }
        n
    }

    fn leaf(&self, label: Label, run: &[&Stmt]) -> Granule {
        let exprs: Vec<&Expr> = run.iter().flat_map(|s| s.own_exprs()).collect();
        Granule {
            label,
            kind: BcsKind::Linear,
            stmts: run.iter().map(|s| s.meta.id).collect(),
            header: None,
            prologue: false,
            arms: Vec::new(),
            relation_to_next_sibling: Relation::None,
            calls: self.count_calls(&exprs),
            gotos: run.iter().filter(|s| matches!(s.kind, StmtKind::Goto(_))).count() as u32,
        }
    }

    fn empty_leaf(&self, label: Label) -> Granule {
        self.leaf(label, &[])
    }

    /// Decompose one statement list; `next` is the last position used.
    fn list(&self, stmts: &[&Stmt], parent: Option<&Label>, next: &mut u32) -> Vec<Granule> {
        let label = |j: u32| parent.map_or_else(|| Label(vec![j]), |p| p.child(j));
        let mut out = Vec::new();
        let mut run: Vec<&Stmt> = Vec::new();
        for &s in stmts {
            if is_structured(s) {
                if !run.is_empty() {
                    *next += 1;
                    out.push(self.leaf(label(*next), &run));
                    run.clear();
                }
                *next += 1;
                out.push(self.structured(s, label(*next)));
            } else {
                run.push(s);
            }
        }
        if !run.is_empty() {
            *next += 1;
            out.push(self.leaf(label(*next), &run));
        }
        link(&mut out);
        out
    }

    fn structured(&self, s: &Stmt, label: Label) -> Granule {
        let arm_stmts: Vec<Vec<&Stmt>> = match &s.kind {
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                let mut v = vec![flatten_all([then_branch.as_ref()])];
                if let Some(e) = else_branch {
                    v.push(flatten_all([e.as_ref()]));
                }
                v
            }
            StmtKind::Switch { body, .. } => body.arms.iter().map(|a| flatten_all(&a.body)).collect(),
            StmtKind::While { body, .. } | StmtKind::DoWhile { body, .. } | StmtKind::For { body, .. } => {
                vec![flatten_all([body.as_ref()])]
            }
            _ => unreachable!("structured statement expected"),
        };
        let mut next = 0;
        let mut arms: Vec<Vec<Granule>> = Vec::with_capacity(arm_stmts.len().max(1));
        for (i, stmts) in arm_stmts.iter().enumerate() {
            if i == 0 && stmts.first().is_none_or(|f| is_structured(f)) {
                next += 1;
                let mut arm = vec![self.empty_leaf(label.child(next))];
                let rest = self.list(stmts, Some(&label), &mut next);
                arm.extend(rest);
                link(&mut arm);
                arms.push(arm);
            } else {
                arms.push(self.list(stmts, Some(&label), &mut next));
            }
        }
        if arms.is_empty() {
            next += 1;
            arms.push(vec![self.empty_leaf(label.child(next))]);
        }
        let first = &mut arms[0][0];
        first.header = Some(s.meta.id);
        first.calls += self.count_calls(&header_exprs(s));
        Granule {
            label,
            kind: classify_bcs(s),
            stmts: vec![s.meta.id],
            header: None,
            prologue: false,
            arms,
            relation_to_next_sibling: Relation::None,
            calls: 0,
            gotos: 0,
        }
    }
}

fn link(list: &mut [Granule]) {
    let n = list.len();
    for (i, g) in list.iter_mut().enumerate() {
        g.relation_to_next_sibling = if i + 1 < n { Relation::Sequence } else { Relation::None };
    }
}

/// Decompose one function. Parameters count as assignments at entry; they
/// are charged to the first top-level leaf, which is created if the body
/// starts with a structure.
pub fn decompose_function(f: &FunctionDef, scopes: &ScopeTree, recursive: bool) -> GranuleTree {
    let b = Builder { scopes };
    let stmts = flatten_all(&f.body.stmts);
    let mut next = 0;
    let mut roots = Vec::new();
    if !f.params.is_empty() && stmts.first().is_none_or(|s| is_structured(s)) {
        next += 1;
        roots.push(b.empty_leaf(Label(vec![next])));
    }
    roots.extend(b.list(&stmts, None, &mut next));
    link(&mut roots);
    if !f.params.is_empty() {
        roots[0].prologue = true;
    }
    GranuleTree {
        function: f.name.clone(),
        recursive,
        param_count: f.params.len(),
        roots,
    }
}

/// Granule trees of every function, in source order.
pub fn decompose(tree: &SyntaxTree, scopes: &ScopeTree) -> Vec<GranuleTree> {
    let rec = detect_recursion(tree);
    tree.functions()
        .map(|f| decompose_function(f, scopes, rec.contains(&f.name)))
        .collect()
}

/// Occurrence region charged to a leaf: its statements, the header it
/// carries and, for the prologue leaf, the parameters.
pub fn leaf_region(tree: &GranuleTree, leaf: &Granule, ledger: &OccurrenceLedger) -> Result<Region, AnalysisError> {
    let occ = ledger.occurrences();
    let missing = |what: &str, id: NodeId| {
        AnalysisError::InconsistentInput(format!(
            "{what} node {} of granule {} in `{}` is not in the ledger",
            id.0, leaf.label, tree.function
        ))
    };
    let mut ranges: Vec<Range<usize>> = Vec::new();
    for id in &leaf.stmts {
        ranges.push(occ.stmt_range(*id).ok_or_else(|| missing("statement", *id))?);
    }
    if let Some(h) = leaf.header {
        ranges.push(occ.header_range(h).ok_or_else(|| missing("header", h))?);
    }
    if leaf.prologue {
        let fr = occ.function_range(&tree.function).ok_or_else(|| {
            AnalysisError::InconsistentInput(format!("function `{}` is not in the ledger", tree.function))
        })?;
        ranges.push(fr.start..fr.start + 2 * tree.param_count);
    }
    Ok(Region::new(ranges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scope::build_scope_tree;

    fn trees(src: &str) -> Vec<GranuleTree> {
        let t = parse_source("t.mc", src).unwrap();
        let s = build_scope_tree(&t).unwrap();
        decompose(&t, &s)
    }

    fn shape(g: &Granule) -> String {
        if g.is_leaf() {
            format!("{}:{}", g.label, g.stmts.len())
        } else {
            let arms: Vec<String> = g
                .arms
                .iter()
                .map(|a| a.iter().map(shape).collect::<Vec<_>>().join(" "))
                .collect();
            format!("{}[{}]", g.label, arms.join(" | "))
        }
    }

    fn shapes(t: &GranuleTree) -> String {
        t.roots.iter().map(shape).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn example6_hierarchy() {
        let t = &trees(corpus::EXAMPLE6)[0];
        assert_eq!(shapes(t), "G1:6 G2[G(2,1):2 G(2,2)[G(2,2,1):1] G(2,3):2]");
        assert_eq!(t.roots[1].kind, BcsKind::WhileLoop);
        assert_eq!(t.find("G(2,2)").unwrap().kind, BcsKind::IfBranch);
        assert!(!t.recursive);
    }

    #[test]
    fn example4_hierarchy() {
        let t = &trees(corpus::EXAMPLE4)[0];
        assert_eq!(shapes(t), "G1[G(1,1):1 G(1,2)[G(1,2,1):1] G(1,3):1] G2[G(2,1):1]");
    }

    #[test]
    fn unit_is_one_leaf() {
        let t = &trees(corpus::UNIT)[0];
        assert_eq!(shapes(t), "G1:2");
    }

    #[test]
    fn empty_leaf_for_nested_start_and_empty_body() {
        let t = &trees("void main() { int x; while (x < 3) { if (x) x = 1; x++; } if (x) { } }")[0];
        assert_eq!(shapes(t), "G1:1 G2[G(2,1):0 G(2,2)[G(2,2,1):1] G(2,3):1] G3[G(3,1):0]");
        assert!(t.find("G(2,1)").unwrap().header.is_some());
    }

    #[test]
    fn arms_are_numbered_across() {
        let t = &trees("void main() { int x; if (x) x = 1; else { x = 2; while (x) x--; } }")[0];
        assert_eq!(shapes(t), "G1:1 G2[G(2,1):1 | G(2,2):1 G(2,3)[G(2,3,1):1]]");
        let t = &trees("void main() { int x; switch (x) { case 1: case 2: x = 1; break; default: x = 0; } }")[0];
        assert_eq!(shapes(t), "G1:1 G2[G(2,1):0 | G(2,2):2 | G(2,3):1]");
    }

    #[test]
    fn blocks_and_labels_are_transparent() {
        let t = &trees("void main() { int x; { x = 1; l: x = 2; } goto l; }")[0];
        assert_eq!(shapes(t), "G1:4");
        assert_eq!(t.roots[0].gotos, 1);
    }

    #[test]
    fn prologue_leaf() {
        let t = &trees("int f(int n) { while (n > 0) n--; return n; } void main() { f(1); }")[0];
        assert_eq!(shapes(t), "G1:0 G2[G(2,1):1] G3:1");
        assert!(t.roots[0].prologue);
    }

    #[test]
    fn calls_are_counted_per_leaf() {
        let ts = trees(corpus::RECURSION);
        let main = ts.iter().find(|t| t.function == "main").unwrap();
        assert_eq!(main.roots[0].calls, 1);
        assert_eq!(main.find("G(2,1)").unwrap().calls, 1);
        assert!(ts.iter().filter(|t| t.recursive).count() == 3);
    }

    #[test]
    fn labels_parse_and_print() {
        for s in ["G1", "G12", "G(2,1)", "G(1,2,3)"] {
            assert_eq!(s.parse::<Label>().unwrap().to_string(), s);
        }
        for s in ["G", "G0", "G(2)", "G(2,)", "H1", "G(1,2", "G1(2,3)"] {
            assert!(s.parse::<Label>().is_err(), "{s}");
        }
    }
}
