//! Program transformations: sequential composition, renaming, permutation
//! and loop wrapping. Every result is printed and re-parsed so node ids are
//! fresh, then re-resolved to check validity.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::TransformError;
use crate::frontend::*;
use crate::scope::{build_scope_tree, resolve_occurrences, VarId};

pub const ENTRY: &str = "main";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ComposeOptions {
    /// Rename Q's variables apart from P's instead of unifying same names.
    pub fresh_rename: bool,
}

fn expr(kind: ExprKind) -> Expr {
    Expr {
        meta: Meta::default(),
        kind,
    }
}

fn stmt(kind: StmtKind) -> Stmt {
    Stmt {
        meta: Meta::default(),
        kind,
    }
}

/// `name = init;` for a dropped declaration.
fn init_as_assignment(name: &str, global: bool, init: &Init) -> Result<Stmt, TransformError> {
    let Init::Expr(value) = init else {
        return Err(TransformError::Compose(format!(
            "cannot turn the aggregate initializer of `{name}` into an assignment"
        )));
    };
    let target = if global {
        ExprKind::Global(name.to_string())
    } else {
        ExprKind::Var(name.to_string())
    };
    Ok(stmt(StmtKind::Expr(expr(ExprKind::Assign {
        target: Box::new(expr(target)),
        value: Box::new(value.clone()),
    }))))
}

fn reparse(tree: &SyntaxTree) -> Result<SyntaxTree, String> {
    let text = pretty_print(tree);
    let mut t = parse_source(&tree.file, &text).map_err(|e| e.to_string())?;
    t.file = tree.file.clone();
    Ok(t)
}

/// Parse and resolve; the error text on failure.
pub fn validate(tree: &SyntaxTree) -> Result<(), String> {
    let s = build_scope_tree(tree).map_err(|e| e.to_string())?;
    resolve_occurrences(tree, &s).map_err(|e| e.to_string())?;
    Ok(())
}

fn item_name(item: &Item) -> Option<&str> {
    match item {
        Item::Record(r) => Some(&r.name),
        Item::Function(f) => Some(&f.name),
        Item::Global(s) => match &s.kind {
            StmtKind::Decl(d) => Some(&d.name),
            _ => None,
        },
    }
}

fn same_item(a: &Item, b: &Item) -> bool {
    let wrap = |i: &Item| SyntaxTree {
        file: String::new(),
        items: vec![i.clone()],
    };
    wrap(a).structurally_eq(&wrap(b))
}

fn split_at_entry(t: &SyntaxTree) -> (Vec<Item>, Option<FunctionDef>, Vec<Item>) {
    let mut before = Vec::new();
    let mut after = Vec::new();
    let mut entry = None;
    for item in &t.items {
        match item {
            Item::Function(f) if f.name == ENTRY && entry.is_none() => entry = Some(f.clone()),
            _ if entry.is_none() => before.push(item.clone()),
            _ => after.push(item.clone()),
        }
    }
    (before, entry, after)
}

/// Sequential composition `P;Q`.
///
/// Items are laid out as P's items before `main`, Q's items before `main`,
/// the merged `main`, then the remaining items of P and of Q. Identical items
/// appear once; a function or record defined differently in both is an
/// error. A global of Q with the same name and type as one of P is unified
/// when Q leaves it uninitialized or initializes it exactly as P does: the
/// declaration is dropped and its initializer becomes an assignment at the
/// start of Q's part of `main`. Other clashing globals of Q are renamed
/// apart so their initializers stay at file scope. Inside `main`, a
/// top-level declaration of Q whose name P's `main` already declares at top
/// level is dropped too and leaves a bare read of the name, followed by its
/// initializer as an assignment. Q's reads of globals that P's `main`
/// shadows are qualified with `::`.
pub fn compose(p: &SyntaxTree, q: &SyntaxTree, opts: ComposeOptions) -> Result<SyntaxTree, TransformError> {
    let q_owned;
    let q = if opts.fresh_rename {
        q_owned = rename_apart(p, q)?;
        &q_owned
    } else {
        let clash = clashing_globals(p, q);
        if clash.is_empty() {
            q
        } else {
            q_owned = rename(q, &fresh_names(p, q, &clash))?;
            &q_owned
        }
    };
    let (p_before, p_main, p_after) = split_at_entry(p);
    let (q_before, q_main, q_after) = split_at_entry(q);

    let mut p_globals: BTreeMap<&str, &TypeRef> = BTreeMap::new();
    for item in p_before.iter().chain(p_after.iter()) {
        if let Item::Global(Stmt {
            kind: StmtKind::Decl(d),
            ..
        }) = item
        {
            p_globals.insert(&d.name, &d.ty);
        }
    }
    let mut q_prefix: Vec<Stmt> = Vec::new();
    let mut unified: BTreeSet<&str> = BTreeSet::new();
    for item in q_before.iter().chain(q_after.iter()) {
        if let Item::Global(Stmt {
            kind: StmtKind::Decl(d),
            ..
        }) = item
        {
            if let Some(ty) = p_globals.get(d.name.as_str()) {
                if **ty != d.ty {
                    return Err(TransformError::Compose(format!(
                        "global `{}` has conflicting types",
                        d.name
                    )));
                }
                if let Some(init) = &d.init {
                    q_prefix.push(init_as_assignment(&d.name, true, init)?);
                }
                unified.insert(&d.name);
            }
        }
    }

    let p_items: Vec<&Item> = p_before.iter().chain(p_after.iter()).collect();
    let admit = |item: &Item, items: &mut Vec<Item>| -> Result<(), TransformError> {
        if let Some(name) = item_name(item) {
            if matches!(item, Item::Global(_)) {
                if unified.contains(name) {
                    return Ok(());
                }
            } else if let Some(twin) = p_items
                .iter()
                .find(|i| !matches!(i, Item::Global(_)) && item_name(i) == Some(name))
            {
                if same_item(twin, item) {
                    return Ok(());
                }
                return Err(TransformError::Compose(format!(
                    "`{name}` is defined differently in both programs"
                )));
            }
        }
        items.push(item.clone());
        Ok(())
    };

    let mut items: Vec<Item> = p_before.clone();
    for i in &q_before {
        admit(i, &mut items)?;
    }

    let main = match (p_main, q_main) {
        (Some(pm), Some(qm)) => {
            if pm
                .params
                .iter()
                .map(|x| (&x.ty, &x.name))
                .ne(qm.params.iter().map(|x| (&x.ty, &x.name)))
            {
                return Err(TransformError::Compose(
                    "entry functions have different parameters".into(),
                ));
            }
            let mut declared: BTreeMap<String, TypeRef> = BTreeMap::new();
            for s in &pm.body.stmts {
                if let StmtKind::Decl(d) = &s.kind {
                    declared.insert(d.name.clone(), d.ty.clone());
                }
            }
            for p in &pm.params {
                declared.insert(p.name.clone(), p.ty.clone());
            }
            // Q's reads of a global must not be captured by a local of P's
            // entry with the same name.
            let q_globals = global_refs(q)?;
            let mut q_stmts = qm.body.stmts.clone();
            for s in &mut q_stmts {
                s.walk_mut(&mut |_| {}, &mut |e| {
                    if let ExprKind::Var(n) = &e.kind {
                        if q_globals.contains(&e.meta.id) && declared.contains_key(n) {
                            e.kind = ExprKind::Global(n.clone());
                        }
                    }
                });
            }
            let mut body = pm.body.stmts.clone();
            body.append(&mut q_prefix);
            for s in &q_stmts {
                match &s.kind {
                    StmtKind::Decl(d) if declared.contains_key(&d.name) => {
                        if declared[&d.name] != d.ty {
                            return Err(TransformError::Compose(format!(
                                "`{}` is declared with conflicting types",
                                d.name
                            )));
                        }
                        // A bare read keeps an occurrence where the
                        // declaration was, so minimum-based SI sees the same
                        // anchor.
                        body.push(stmt(StmtKind::Expr(expr(ExprKind::Var(d.name.clone())))));
                        if let Some(init) = &d.init {
                            body.push(init_as_assignment(&d.name, false, init)?);
                        }
                    }
                    _ => body.push(s.clone()),
                }
            }
            let mut m = pm.clone();
            m.body.stmts = body;
            Some(m)
        }
        (Some(pm), None) => Some(pm),
        (None, Some(mut qm)) => {
            let mut body = std::mem::take(&mut q_prefix);
            body.append(&mut qm.body.stmts);
            qm.body.stmts = body;
            Some(qm)
        }
        (None, None) => None,
    };
    if let Some(m) = main {
        items.push(Item::Function(m));
    } else if !q_prefix.is_empty() {
        return Err(TransformError::Compose(
            "no entry function to hold unified initializers".into(),
        ));
    }
    items.extend(p_after.iter().cloned());
    for i in &q_after {
        admit(i, &mut items)?;
    }

    let composed = SyntaxTree {
        file: p.file.clone(),
        items,
    };
    let t = reparse(&composed).map_err(TransformError::Compose)?;
    validate(&t).map_err(TransformError::Compose)?;
    Ok(t)
}

/// Identifier nodes that bind to a global variable.
fn global_refs(t: &SyntaxTree) -> Result<BTreeSet<NodeId>, TransformError> {
    let scopes = build_scope_tree(t).map_err(|e| TransformError::Compose(e.to_string()))?;
    let occ = resolve_occurrences(t, &scopes).map_err(|e| TransformError::Compose(e.to_string()))?;
    Ok(occ
        .refs
        .iter()
        .filter(|r| scopes.variable(r.variable).scope == scopes.root)
        .map(|r| r.node)
        .collect())
}

/// Variable names declared anywhere in the program.
pub fn variable_names(t: &SyntaxTree) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    for item in &t.items {
        match item {
            Item::Global(s) => {
                if let StmtKind::Decl(d) = &s.kind {
                    names.insert(d.name.clone());
                }
            }
            Item::Function(f) => {
                names.extend(f.params.iter().map(|p| p.name.clone()));
                let mut body = f.body.stmts.clone();
                for s in &mut body {
                    s.walk_mut(
                        &mut |s| {
                            if let StmtKind::Decl(d) = &s.kind {
                                names.insert(d.name.clone());
                            }
                        },
                        &mut |_| {},
                    );
                }
            }
            Item::Record(_) => {}
        }
    }
    names
}

fn apply_names(t: &mut SyntaxTree, map: &BTreeMap<String, String>) {
    let sub = |n: &mut String| {
        if let Some(m) = map.get(n) {
            *n = m.clone();
        }
    };
    let mut fs = |s: &mut Stmt| {
        if let StmtKind::Decl(d) = &mut s.kind {
            sub(&mut d.name);
        }
    };
    let mut fe = |e: &mut Expr| {
        if let ExprKind::Var(n) | ExprKind::Global(n) = &mut e.kind {
            sub(n);
        }
    };
    for item in &mut t.items {
        match item {
            Item::Global(s) => s.walk_mut(&mut fs, &mut fe),
            Item::Function(f) => {
                f.params.iter_mut().for_each(|p| sub(&mut p.name));
                f.body.stmts.iter_mut().for_each(|s| s.walk_mut(&mut fs, &mut fe));
            }
            Item::Record(_) => {}
        }
    }
}

fn binding_shape(t: &SyntaxTree) -> Result<Vec<VarId>, String> {
    let s = build_scope_tree(t).map_err(|e| e.to_string())?;
    let o = resolve_occurrences(t, &s).map_err(|e| e.to_string())?;
    Ok(o.refs.iter().map(|r| r.variable).collect())
}

/// Consistent renaming of variables. Names absent from the mapping are
/// kept; functions, records, members and labels are never renamed.
pub fn rename(p: &SyntaxTree, mapping: &BTreeMap<String, String>) -> Result<SyntaxTree, TransformError> {
    let names = variable_names(p);
    let mut image: BTreeMap<String, String> = BTreeMap::new();
    for n in &names {
        let to = mapping.get(n).unwrap_or(n);
        if !is_identifier(to) {
            return Err(TransformError::RenameCollision(format!(
                "`{to}` is not a valid identifier"
            )));
        }
        if let Some(prev) = image.insert(to.clone(), n.clone()) {
            return Err(TransformError::RenameCollision(format!(
                "`{prev}` and `{n}` both map to `{to}`"
            )));
        }
    }
    let callables: BTreeSet<&str> = p
        .functions()
        .map(|f| f.name.as_str())
        .chain(["print", "read"])
        .collect();
    if let Some(clash) = image
        .keys()
        .find(|k| callables.contains(k.as_str()) && !names.contains(*k))
    {
        return Err(TransformError::RenameCollision(format!("`{clash}` names a function")));
    }
    let mut t = p.clone();
    apply_names(&mut t, mapping);
    let t = reparse(&t).map_err(TransformError::RenameCollision)?;
    let before = binding_shape(p).map_err(TransformError::RenameCollision)?;
    let after = binding_shape(&t).map_err(TransformError::RenameCollision)?;
    if before != after {
        return Err(TransformError::RenameCollision(
            "renaming changes which declaration a use refers to".into(),
        ));
    }
    Ok(t)
}

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|f| f.is_ascii_alphabetic() || f == '_')
        && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
        && !is_keyword(s)
}

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Rename every variable of `q` that also occurs in `p` to a fresh name.
pub fn rename_apart(p: &SyntaxTree, q: &SyntaxTree) -> Result<SyntaxTree, TransformError> {
    let shared: BTreeSet<String> = variable_names(p).intersection(&variable_names(q)).cloned().collect();
    rename(q, &fresh_names(p, q, &shared))
}

/// `{n}_q{k}` for each name, with the smallest `k` unused in either program.
fn fresh_names(p: &SyntaxTree, q: &SyntaxTree, names: &BTreeSet<String>) -> BTreeMap<String, String> {
    let taken: BTreeSet<String> = variable_names(p).into_iter().chain(variable_names(q)).collect();
    let mut map = BTreeMap::new();
    for n in names {
        let fresh = (1..)
            .map(|k| format!("{n}_q{k}"))
            .find(|c| !taken.contains(c))
            .expect("unbounded");
        map.insert(n.clone(), fresh);
    }
    map
}

/// Globals of Q that cannot be unified with P's without moving Q's
/// initializer out of file scope: Q initializes them and P does not, or
/// P initializes them differently.
fn clashing_globals(p: &SyntaxTree, q: &SyntaxTree) -> BTreeSet<String> {
    let globals = |t: &SyntaxTree| -> BTreeMap<String, Item> {
        t.items
            .iter()
            .filter_map(|i| match i {
                Item::Global(Stmt {
                    kind: StmtKind::Decl(d),
                    ..
                }) => Some((d.name.clone(), i.clone())),
                _ => None,
            })
            .collect()
    };
    let init = |i: &Item| matches!(i, Item::Global(Stmt { kind: StmtKind::Decl(d), .. }) if d.init.is_some());
    let pg = globals(p);
    globals(q)
        .into_iter()
        .filter(|(n, qi)| match pg.get(n) {
            Some(pi) => init(qi) && (!init(pi) || !same_item(pi, qi)),
            None => false,
        })
        .map(|(n, _)| n)
        .collect()
}

fn block_at<'a>(t: &'a mut SyntaxTree, function: &str, path: &[usize]) -> Result<&'a mut Vec<Stmt>, TransformError> {
    let bad = |m: String| TransformError::InvalidPermutation(m);
    let f = t
        .items
        .iter_mut()
        .find_map(|i| match i {
            Item::Function(f) if f.name == function => Some(f),
            _ => None,
        })
        .ok_or_else(|| bad(format!("no function `{function}`")))?;
    let mut stmts = &mut f.body.stmts;
    for &i in path {
        let s = stmts
            .get_mut(i)
            .ok_or_else(|| bad(format!("no statement {i} on the block path")))?;
        stmts = match &mut s.kind {
            StmtKind::Block(b) => &mut b.stmts,
            _ => return Err(bad(format!("statement {i} on the block path is not a block"))),
        };
    }
    Ok(stmts)
}

/// Reorder the statements of one block: `order[k]` is the old index of the
/// statement placed at position `k`. `path` selects nested blocks by index,
/// starting from the function body.
pub fn permute(p: &SyntaxTree, function: &str, path: &[usize], order: &[usize]) -> Result<SyntaxTree, TransformError> {
    let mut t = p.clone();
    let stmts = block_at(&mut t, function, path)?;
    let mut seen = vec![false; stmts.len()];
    if order.len() != stmts.len()
        || order
            .iter()
            .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
    {
        return Err(TransformError::InvalidPermutation(format!(
            "{order:?} is not a permutation of {} statements",
            stmts.len()
        )));
    }
    let old = std::mem::take(stmts);
    *stmts = order.iter().map(|&i| old[i].clone()).collect();
    let t = reparse(&t).map_err(TransformError::InvalidPermutation)?;
    validate(&t).map_err(TransformError::InvalidPermutation)?;
    Ok(t)
}

/// Wrap statements `range` of a function body in `while (cond) { ... }`.
pub fn wrap_in_loop(
    p: &SyntaxTree,
    function: &str,
    range: std::ops::Range<usize>,
    cond: Expr,
) -> Result<SyntaxTree, TransformError> {
    let mut t = p.clone();
    let stmts = block_at(&mut t, function, &[])?;
    if range.end > stmts.len() || range.is_empty() {
        return Err(TransformError::InvalidPermutation(format!(
            "bad statement range {range:?}"
        )));
    }
    let inner: Vec<Stmt> = stmts.drain(range.clone()).collect();
    let body = stmt(StmtKind::Block(Block {
        meta: Meta::default(),
        stmts: inner,
    }));
    stmts.insert(
        range.start,
        stmt(StmtKind::While {
            cond,
            body: Box::new(body),
        }),
    );
    let t = reparse(&t).map_err(TransformError::InvalidPermutation)?;
    validate(&t).map_err(TransformError::InvalidPermutation)?;
    Ok(t)
}

/// Move statement `from` of a function body to the end of the body of the
/// top-level loop at `into`.
pub fn relocate(p: &SyntaxTree, function: &str, from: usize, into: usize) -> Result<SyntaxTree, TransformError> {
    let mut t = p.clone();
    let stmts = block_at(&mut t, function, &[])?;
    if from >= stmts.len() || into >= stmts.len() || from == into {
        return Err(TransformError::InvalidPermutation(format!(
            "cannot move {from} into {into}"
        )));
    }
    let moved = stmts.remove(from);
    let into = if from < into { into - 1 } else { into };
    let body = match &mut stmts[into].kind {
        StmtKind::While { body, .. } | StmtKind::DoWhile { body, .. } | StmtKind::For { body, .. } => body,
        _ => {
            return Err(TransformError::InvalidPermutation(format!(
                "statement {into} is not a loop"
            )))
        }
    };
    match &mut body.kind {
        StmtKind::Block(b) => b.stmts.push(moved),
        _ => {
            let old = std::mem::replace(body.as_mut(), stmt(StmtKind::Empty));
            **body = stmt(StmtKind::Block(Block {
                meta: Meta::default(),
                stmts: vec![old, moved],
            }));
        }
    }
    let t = reparse(&t).map_err(TransformError::InvalidPermutation)?;
    validate(&t).map_err(TransformError::InvalidPermutation)?;
    Ok(t)
}

/// `if (true) { body }` around a whole function body: same behaviour,
/// one more nesting level.
pub fn guard_body(p: &SyntaxTree, function: &str) -> Result<SyntaxTree, TransformError> {
    let mut t = p.clone();
    let stmts = block_at(&mut t, function, &[])?;
    let inner = std::mem::take(stmts);
    stmts.push(stmt(StmtKind::If {
        cond: expr(ExprKind::Literal(Literal::Bool(true))),
        then_branch: Box::new(stmt(StmtKind::Block(Block {
            meta: Meta::default(),
            stmts: inner,
        }))),
        else_branch: None,
    }));
    let t = reparse(&t).map_err(TransformError::Compose)?;
    validate(&t).map_err(TransformError::Compose)?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze_tree;
    use crate::corpus;
    use crate::metrics::WeightTable;
    use crate::sicn::SiMode;

    fn tree(s: &str) -> SyntaxTree {
        parse_source("t.mc", s).unwrap()
    }

    fn escim(t: &SyntaxTree, mode: SiMode) -> u64 {
        analyze_tree(t.clone(), mode, &WeightTable::default()).unwrap().escim
    }

    fn main_text(t: &SyntaxTree) -> String {
        pretty_print(t)
    }

    #[test]
    fn compose_disjoint() {
        let p = tree("void main() { int a; a = 1; }");
        let q = tree("void main() { int b; b = 2; }");
        let pq = compose(&p, &q, ComposeOptions::default()).unwrap();
        assert!(pq.structurally_eq(&tree("void main() { int a; a = 1; int b; b = 2; }")));
        assert_eq!(escim(&pq, SiMode::Delta), 2);
    }

    #[test]
    fn compose_unifies_declaration() {
        let p = tree("void main() { int v; v = 1; v = v + 1; }");
        let q = tree("void main() { int v = 5; print(v); }");
        let pq = compose(&p, &q, ComposeOptions::default()).unwrap();
        assert!(pq.structurally_eq(&tree("void main() { int v; v = 1; v = v + 1; v; v = 5; print(v); }")));
        let fresh = compose(&p, &q, ComposeOptions { fresh_rename: true }).unwrap();
        assert!(fresh.structurally_eq(&tree(
            "void main() { int v; v = 1; v = v + 1; int v_q1 = 5; print(v_q1); }"
        )));
    }

    #[test]
    fn compose_identity_and_conflicts() {
        let p = tree(corpus::EXAMPLE6);
        let empty = tree("");
        assert!(compose(&p, &empty, ComposeOptions::default())
            .unwrap()
            .structurally_eq(&p));
        assert!(compose(&empty, &p, ComposeOptions::default())
            .unwrap()
            .structurally_eq(&p));
        let q = tree("void main() { bool numcount; numcount = true; }");
        assert!(matches!(
            compose(&p, &q, ComposeOptions::default()),
            Err(TransformError::Compose(_))
        ));
        let f1 = tree("int f() { return 1; } void main() { f(); }");
        let f2 = tree("int f() { return 2; } void main() { f(); }");
        assert!(compose(&f1, &f2, ComposeOptions::default()).is_err());
        let same = compose(&f1, &f1, ComposeOptions::default()).unwrap();
        assert_eq!(same.functions().count(), 2);
    }

    #[test]
    fn compose_globals() {
        let p = tree("int g = 1; void main() { g = g + 1; }");
        let q = tree("int g = 7; void main() { print(g); }");
        let pq = compose(&p, &q, ComposeOptions::default()).unwrap();
        assert!(pq.structurally_eq(&tree(
            "int g = 1; int g_q1 = 7; void main() { g = g + 1; print(g_q1); }"
        )));
        let same = tree("int g = 1; void main() { print(g); }");
        let pq = compose(&p, &same, ComposeOptions::default()).unwrap();
        assert!(pq.structurally_eq(&tree("int g = 1; void main() { g = g + 1; ::g = 1; print(g); }")));
        let bare = tree("int g; void main() { print(g); }");
        let pq = compose(&p, &bare, ComposeOptions::default()).unwrap();
        assert!(pq.structurally_eq(&tree("int g = 1; void main() { g = g + 1; print(g); }")));
        let r = tree("bool g; void main() { }");
        assert!(compose(&p, &r, ComposeOptions::default()).is_err());
    }

    #[test]
    fn compose_keeps_q_global_reads_out_of_p_locals() {
        let p = tree("void main() { int g = 2; print(g); }");
        let q = tree("int g = 5; void main() { print(g); }");
        let pq = compose(&p, &q, ComposeOptions::default()).unwrap();
        let want = tree("int g = 5; void main() { int g = 2; print(g); print(::g); }");
        assert!(pq.structurally_eq(&want), "{}", pretty_print(&pq));
    }

    #[test]
    fn compose_is_associative_on_corpus() {
        let fx: Vec<SyntaxTree> = corpus::bundled().iter().map(|f| tree(f.source)).collect();
        let o = ComposeOptions::default();
        for w in fx.windows(3) {
            let left = compose(&w[0], &w[1], o).and_then(|ab| compose(&ab, &w[2], o));
            let right = compose(&w[1], &w[2], o).and_then(|bc| compose(&w[0], &bc, o));
            match (left, right) {
                (Ok(l), Ok(r)) => assert!(l.structurally_eq(&r), "{}", main_text(&l)),
                (l, r) => assert_eq!(l.is_err(), r.is_err()),
            }
        }
    }

    #[test]
    fn rename_keeps_metrics() {
        let p = tree(corpus::EXAMPLE1);
        let map: BTreeMap<String, String> = [("userInput", "x"), ("square", "y")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let r = rename(&p, &map).unwrap();
        let w = WeightTable::default();
        let (a, b) = (
            analyze_tree(p, SiMode::Delta, &w).unwrap(),
            analyze_tree(r, SiMode::Delta, &w).unwrap(),
        );
        assert_eq!((a.i_l, a.escim, a.loc), (b.i_l, b.escim, b.loc));
        assert_eq!(b.i_l, 3);
    }

    #[test]
    fn rename_identity_and_collision() {
        let p = tree(corpus::EXAMPLE2);
        assert!(rename(&p, &BTreeMap::new()).unwrap().structurally_eq(&p));
        let p = tree("void main() { int a; int b; a = b; }");
        let map = BTreeMap::from([("a".to_string(), "b".to_string())]);
        assert!(matches!(rename(&p, &map), Err(TransformError::RenameCollision(_))));
        let map = BTreeMap::from([("a".to_string(), "main".to_string())]);
        assert!(rename(&p, &map).is_err());
    }

    #[test]
    fn rename_rejects_capture() {
        // Renaming the inner x to y would capture the outer y read.
        let p = tree("void main() { int y; y = 1; { int x; x = y; } }");
        let map = BTreeMap::from([("x".to_string(), "y".to_string())]);
        assert!(rename(&p, &map).is_err());
    }

    #[test]
    fn permute_checks_declarations() {
        let p = tree("void main() { int a; int b; a = 1; b = 2; }");
        let swapped = permute(&p, "main", &[], &[0, 1, 3, 2]).unwrap();
        assert!(swapped.structurally_eq(&tree("void main() { int a; int b; b = 2; a = 1; }")));
        assert_eq!(escim(&swapped, SiMode::Delta), escim(&p, SiMode::Delta));
        assert!(matches!(
            permute(&p, "main", &[], &[2, 0, 1, 3]),
            Err(TransformError::InvalidPermutation(_))
        ));
        assert!(permute(&p, "main", &[], &[0, 0, 1, 2]).is_err());
        let nested = tree("void main() { int a; { a = 1; a = 2; } }");
        assert!(permute(&nested, "main", &[1], &[1, 0]).is_ok());
    }

    #[test]
    fn relocate_into_loop_amplifies() {
        let p = tree("void main() { int a; int i; a = 1; while (i < 3) { i++; } }");
        let before = escim(&p, SiMode::Delta);
        let moved = relocate(&p, "main", 2, 3).unwrap();
        // a's assignment moves from weight 1 to weight 3.
        assert_eq!(escim(&moved, SiMode::Delta), before + 2);
    }

    #[test]
    fn wrap_and_guard() {
        let p = tree(corpus::EXAMPLE1);
        let w = wrap_in_loop(&p, "main", 2..4, expr(ExprKind::Literal(Literal::Bool(false)))).unwrap();
        assert!(validate(&w).is_ok());
        let g = guard_body(&tree(corpus::SUM_FORMULA), "main").unwrap();
        assert_eq!(
            escim(&g, SiMode::Delta),
            2 * escim(&tree(corpus::SUM_FORMULA), SiMode::Delta)
        );
    }
}
