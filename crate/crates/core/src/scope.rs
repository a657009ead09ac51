//! Lexical scopes and identifier binding.
//!
//! Each declaration becomes its own [`ScopedVariable`]; a shadowing
//! declaration in an inner scope is a different variable from the outer one
//! even though the names match. [`resolve_occurrences`] then walks the program
//! in depth-first source order and binds every identifier to the nearest
//! visible declaration, producing the ordered occurrence list the ledger is
//! built from.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::Range;

use serde::Serialize;

use crate::error::ResolveError;
use crate::frontend::*;

pub const BUILTINS: &[&str] = &["print", "read"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ScopeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeKind {
    Global,
    Function,
    Block,
    ForInit,
    SwitchBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    pub parent: Option<ScopeId>,
    pub kind: ScopeKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopedVariable {
    pub id: VarId,
    pub name: String,
    pub scope: ScopeId,
    pub decl_span: SourceSpan,
    /// Declaration statement or parameter node.
    pub decl_node: NodeId,
    pub ty: TypeRef,
    pub is_record: bool,
    pub members: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ScopeTree {
    pub scopes: Vec<Scope>,
    pub root: ScopeId,
    pub variables: Vec<ScopedVariable>,
    scope_of_node: HashMap<NodeId, ScopeId>,
    var_of_decl: HashMap<NodeId, VarId>,
    functions: HashSet<String>,
    records: HashMap<String, Vec<String>>,
}

impl ScopeTree {
    pub fn scope(&self, id: ScopeId) -> &Scope {
        &self.scopes[id.0]
    }

    pub fn variable(&self, id: VarId) -> &ScopedVariable {
        &self.variables[id.0]
    }

    pub fn variables_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a ScopedVariable> + 'a {
        self.variables.iter().filter(move |v| v.name == name)
    }

    /// The scope opened by a function, block, for statement or switch body node.
    pub fn scope_of(&self, node: NodeId) -> Option<ScopeId> {
        self.scope_of_node.get(&node).copied()
    }

    pub fn var_declared_at(&self, node: NodeId) -> Option<VarId> {
        self.var_of_decl.get(&node).copied()
    }

    pub fn is_user_function(&self, name: &str) -> bool {
        self.functions.contains(name)
    }

    pub fn depth(&self, mut id: ScopeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.scopes[id.0].parent {
            id = p;
            d += 1;
        }
        d
    }
}

struct ScopeBuilder {
    tree: ScopeTree,
    names: Vec<HashMap<String, VarId>>,
}

impl ScopeBuilder {
    fn open(&mut self, parent: ScopeId, kind: ScopeKind, span: &SourceSpan, owner: NodeId) -> ScopeId {
        let id = ScopeId(self.tree.scopes.len());
        self.tree.scopes.push(Scope {
            parent: Some(parent),
            kind,
            span: span.clone(),
        });
        self.names.push(HashMap::new());
        self.tree.scope_of_node.insert(owner, id);
        id
    }

    fn declare(
        &mut self,
        scope: ScopeId,
        name: &str,
        ty: &TypeRef,
        node: NodeId,
        span: &SourceSpan,
    ) -> Result<(), ResolveError> {
        if self.names[scope.0].contains_key(name) {
            return Err(ResolveError::DuplicateDeclaration {
                name: name.to_string(),
                span: span.clone(),
            });
        }
        let members = match &ty.base {
            BaseType::Named(n) => self.tree.records.get(n).cloned().unwrap_or_default(),
            _ => Vec::new(),
        };
        let id = VarId(self.tree.variables.len());
        self.tree.variables.push(ScopedVariable {
            id,
            name: name.to_string(),
            scope,
            decl_span: span.clone(),
            decl_node: node,
            ty: ty.clone(),
            is_record: !members.is_empty(),
            members,
        });
        self.names[scope.0].insert(name.to_string(), id);
        self.tree.var_of_decl.insert(node, id);
        Ok(())
    }

    fn stmt(&mut self, s: &Stmt, scope: ScopeId) -> Result<(), ResolveError> {
        match &s.kind {
            StmtKind::Decl(d) => self.declare(scope, &d.name, &d.ty, s.meta.id, &s.meta.span)?,
            StmtKind::Block(b) => {
                let inner = self.open(scope, ScopeKind::Block, &b.meta.span, b.meta.id);
                for st in &b.stmts {
                    self.stmt(st, inner)?;
                }
            }
            StmtKind::For { init, body, .. } => {
                let inner = self.open(scope, ScopeKind::ForInit, &s.meta.span, s.meta.id);
                if let ForInit::Decl(d) = init {
                    self.stmt(d, inner)?;
                }
                self.stmt(body, inner)?;
            }
            StmtKind::Switch { body, .. } => {
                let inner = self.open(scope, ScopeKind::SwitchBody, &body.meta.span, body.meta.id);
                for arm in &body.arms {
                    for st in &arm.body {
                        self.stmt(st, inner)?;
                    }
                }
            }
            _ => {
                for c in s.child_stmts() {
                    self.stmt(c, scope)?;
                }
            }
        }
        Ok(())
    }
}

/// Build the scope tree and register every declaration in its innermost scope.
pub fn build_scope_tree(tree: &SyntaxTree) -> Result<ScopeTree, ResolveError> {
    let whole = whole_span(tree);
    let mut b = ScopeBuilder {
        tree: ScopeTree {
            scopes: vec![Scope {
                parent: None,
                kind: ScopeKind::Global,
                span: whole,
            }],
            root: ScopeId(0),
            variables: Vec::new(),
            scope_of_node: HashMap::new(),
            var_of_decl: HashMap::new(),
            functions: HashSet::new(),
            records: HashMap::new(),
        },
        names: vec![HashMap::new()],
    };

    for item in &tree.items {
        match item {
            Item::Record(r) => {
                if b.tree.records.contains_key(&r.name) {
                    return Err(ResolveError::DuplicateDeclaration {
                        name: r.name.clone(),
                        span: r.meta.span.clone(),
                    });
                }
                b.tree
                    .records
                    .insert(r.name.clone(), r.fields.iter().map(|f| f.name.clone()).collect());
            }
            Item::Function(f) => {
                if BUILTINS.contains(&f.name.as_str()) || !b.tree.functions.insert(f.name.clone()) {
                    return Err(ResolveError::DuplicateDeclaration {
                        name: f.name.clone(),
                        span: f.meta.span.clone(),
                    });
                }
            }
            Item::Global(_) => {}
        }
    }

    let root = b.tree.root;
    for item in &tree.items {
        match item {
            Item::Global(s) => b.stmt(s, root)?,
            Item::Function(f) => {
                let fs = b.open(root, ScopeKind::Function, &f.meta.span, f.meta.id);
                for p in &f.params {
                    b.declare(fs, &p.name, &p.ty, p.meta.id, &p.meta.span)?;
                }
                for s in &f.body.stmts {
                    b.stmt(s, fs)?;
                }
            }
            Item::Record(_) => {}
        }
    }
    Ok(b.tree)
}

fn whole_span(tree: &SyntaxTree) -> SourceSpan {
    let spans = tree.items.iter().map(|i| match i {
        Item::Record(r) => &r.meta.span,
        Item::Function(f) => &f.meta.span,
        Item::Global(s) => &s.meta.span,
    });
    spans
        .fold(None, |acc: Option<SourceSpan>, s| {
            Some(acc.map_or_else(|| s.clone(), |a| a.join(s)))
        })
        .unwrap_or_else(|| SourceSpan::new(&tree.file, 1, 1, 1, 1))
}

// ------------------------------------------------------------------ occurrences

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Declaration,
    AssignmentTarget,
    Read,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceRef {
    pub variable: VarId,
    pub member: Option<String>,
    /// The identifier expression, or the declaration / parameter node.
    pub node: NodeId,
    pub ordinal: usize,
    pub role: Role,
}

/// Ordered occurrences plus, per statement node, the ordinal range of the
/// occurrences it contains.
#[derive(Debug, Clone)]
pub struct Occurrences {
    pub refs: Vec<OccurrenceRef>,
    stmt_ranges: HashMap<NodeId, Range<usize>>,
    header_ranges: HashMap<NodeId, Range<usize>>,
    function_ranges: BTreeMap<String, Range<usize>>,
}

impl Occurrences {
    /// Occurrences inside statement `stmt`, nested statements included.
    pub fn stmt_range(&self, stmt: NodeId) -> Option<Range<usize>> {
        self.stmt_ranges.get(&stmt).cloned()
    }

    /// Occurrences in the header of a control statement: conditions, for
    /// clauses, switch scrutinee. Empty for simple statements.
    pub fn header_range(&self, stmt: NodeId) -> Option<Range<usize>> {
        self.header_ranges.get(&stmt).cloned()
    }

    pub fn function_range(&self, name: &str) -> Option<Range<usize>> {
        self.function_ranges.get(name).cloned()
    }

    pub fn len(&self) -> usize {
        self.refs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.is_empty()
    }
}

struct Resolver<'a> {
    scopes: &'a ScopeTree,
    visible: Vec<HashMap<String, VarId>>,
    out: Vec<OccurrenceRef>,
    stmt_ranges: HashMap<NodeId, Range<usize>>,
    header_ranges: HashMap<NodeId, Range<usize>>,
}

impl<'a> Resolver<'a> {
    fn push(&mut self, variable: VarId, member: Option<String>, node: NodeId, role: Role) {
        let ordinal = self.out.len();
        self.out.push(OccurrenceRef {
            variable,
            member,
            node,
            ordinal,
            role,
        });
    }

    fn lookup(&self, mut scope: ScopeId, name: &str) -> Option<VarId> {
        loop {
            if let Some(v) = self.visible[scope.0].get(name) {
                return Some(*v);
            }
            scope = self.scopes.scope(scope).parent?;
        }
    }

    fn make_visible(&mut self, node: NodeId) {
        let var = self
            .scopes
            .var_declared_at(node)
            .expect("declaration registered by build_scope_tree");
        let v = self.scopes.variable(var);
        self.visible[v.scope.0].insert(v.name.clone(), var);
    }

    fn block_stmts(&mut self, stmts: &[Stmt], scope: ScopeId) -> Result<(), ResolveError> {
        for s in stmts {
            self.stmt(s, scope)?;
        }
        Ok(())
    }

    fn stmt(&mut self, s: &Stmt, scope: ScopeId) -> Result<(), ResolveError> {
        let start = self.out.len();
        match &s.kind {
            StmtKind::Decl(d) => {
                self.make_visible(s.meta.id);
                let var = self.scopes.var_declared_at(s.meta.id).unwrap();
                self.push(var, None, s.meta.id, Role::Declaration);
                if let Some(init) = &d.init {
                    self.push(var, None, s.meta.id, Role::AssignmentTarget);
                    for e in init.exprs() {
                        self.expr(e, scope)?;
                    }
                }
            }
            StmtKind::Expr(e) => self.expr(e, scope)?,
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    self.expr(e, scope)?;
                }
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.expr(cond, scope)?;
                self.header_ranges.insert(s.meta.id, start..self.out.len());
                self.stmt(then_branch, scope)?;
                if let Some(e) = else_branch {
                    self.stmt(e, scope)?;
                }
            }
            StmtKind::Switch { scrutinee, body } => {
                self.expr(scrutinee, scope)?;
                self.header_ranges.insert(s.meta.id, start..self.out.len());
                let inner = self.scopes.scope_of(body.meta.id).unwrap();
                for arm in &body.arms {
                    self.block_stmts(&arm.body, inner)?;
                }
            }
            StmtKind::While { cond, body } => {
                self.expr(cond, scope)?;
                self.header_ranges.insert(s.meta.id, start..self.out.len());
                self.stmt(body, scope)?;
            }
            StmtKind::DoWhile { body, cond } => {
                self.stmt(body, scope)?;
                let h = self.out.len();
                self.expr(cond, scope)?;
                self.header_ranges.insert(s.meta.id, h..self.out.len());
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                let inner = self.scopes.scope_of(s.meta.id).unwrap();
                match init {
                    ForInit::Decl(d) => self.stmt(d, inner)?,
                    ForInit::Expr(e) => self.expr(e, inner)?,
                    ForInit::None => {}
                }
                if let Some(c) = cond {
                    self.expr(c, inner)?;
                }
                if let Some(u) = update {
                    self.expr(u, inner)?;
                }
                self.header_ranges.insert(s.meta.id, start..self.out.len());
                self.stmt(body, inner)?;
            }
            StmtKind::Labeled { stmt, .. } => self.stmt(stmt, scope)?,
            StmtKind::Block(b) => {
                let inner = self.scopes.scope_of(b.meta.id).unwrap();
                self.block_stmts(&b.stmts, inner)?;
            }
            StmtKind::Break | StmtKind::Continue | StmtKind::Goto(_) | StmtKind::Empty => {}
        }
        self.stmt_ranges.insert(s.meta.id, start..self.out.len());
        Ok(())
    }

    fn bind(&self, e: &Expr, scope: ScopeId) -> Result<VarId, ResolveError> {
        let (name, found) = match &e.kind {
            ExprKind::Var(n) => (n, self.lookup(scope, n)),
            ExprKind::Global(n) => (n, self.visible[self.scopes.root.0].get(n).copied()),
            _ => unreachable!("bind called on a non-identifier"),
        };
        found.ok_or_else(|| ResolveError::UnresolvedName {
            name: name.clone(),
            span: e.meta.span.clone(),
        })
    }

    /// Handle an access path `root[i].m[j]...`: one occurrence for the root
    /// variable (with the first member, if any), then the index expressions.
    /// Returns false if the path is not rooted at a variable.
    fn access(&mut self, e: &Expr, scope: ScopeId, role: Role) -> Result<bool, ResolveError> {
        let mut indices = Vec::new();
        let mut member: Option<(&String, &SourceSpan)> = None;
        let mut cur = e;
        loop {
            match &cur.kind {
                ExprKind::Member { base, field } => {
                    member = Some((field, &cur.meta.span));
                    cur = base;
                }
                ExprKind::Index { base, index } => {
                    indices.push(index.as_ref());
                    cur = base;
                }
                ExprKind::Var(_) | ExprKind::Global(_) => break,
                _ => return Ok(false),
            }
        }
        let var = self.bind(cur, scope)?;
        if let Some((field, span)) = member {
            let v = self.scopes.variable(var);
            if !v.members.contains(field) {
                return Err(ResolveError::UnresolvedMember {
                    base: v.name.clone(),
                    member: field.clone(),
                    span: span.clone(),
                });
            }
        }
        self.push(var, member.map(|(f, _)| f.clone()), cur.meta.id, role);
        // Collected outermost-first; source order is innermost-first.
        for idx in indices.into_iter().rev() {
            self.expr(idx, scope)?;
        }
        Ok(true)
    }

    fn target(&mut self, t: &Expr, scope: ScopeId) -> Result<(), ResolveError> {
        if !self.access(t, scope, Role::AssignmentTarget)? {
            self.expr(t, scope)?;
        }
        Ok(())
    }

    fn expr(&mut self, e: &Expr, scope: ScopeId) -> Result<(), ResolveError> {
        match &e.kind {
            ExprKind::Var(_) | ExprKind::Global(_) | ExprKind::Member { .. } | ExprKind::Index { .. } => {
                if !self.access(e, scope, Role::Read)? {
                    for c in e.children() {
                        self.expr(c, scope)?;
                    }
                }
            }
            ExprKind::Assign { target, value } | ExprKind::CompoundAssign { target, value, .. } => {
                self.target(target, scope)?;
                self.expr(value, scope)?;
            }
            ExprKind::Increment(t) | ExprKind::Decrement(t) => self.target(t, scope)?,
            ExprKind::Call { callee, args } => {
                if !BUILTINS.contains(&callee.as_str()) && !self.scopes.is_user_function(callee) {
                    return Err(ResolveError::UnresolvedName {
                        name: callee.clone(),
                        span: e.meta.span.clone(),
                    });
                }
                for a in args {
                    self.expr(a, scope)?;
                }
            }
            ExprKind::Literal(_) | ExprKind::Unary { .. } | ExprKind::Binary { .. } => {
                for c in e.children() {
                    self.expr(c, scope)?;
                }
            }
        }
        Ok(())
    }
}

/// Bind every identifier occurrence, in depth-first source order.
///
/// A declaration becomes visible at its declarator, so later statements (and
/// its own initializer) see it; earlier statements keep their outer binding.
pub fn resolve_occurrences(tree: &SyntaxTree, scopes: &ScopeTree) -> Result<Occurrences, ResolveError> {
    let mut r = Resolver {
        scopes,
        visible: vec![HashMap::new(); scopes.scopes.len()],
        out: Vec::new(),
        stmt_ranges: HashMap::new(),
        header_ranges: HashMap::new(),
    };
    let mut function_ranges = BTreeMap::new();
    for item in &tree.items {
        match item {
            Item::Global(s) => r.stmt(s, scopes.root)?,
            Item::Function(f) => {
                let start = r.out.len();
                let fs = scopes.scope_of(f.meta.id).unwrap();
                for p in &f.params {
                    r.make_visible(p.meta.id);
                    let var = scopes.var_declared_at(p.meta.id).unwrap();
                    r.push(var, None, p.meta.id, Role::Declaration);
                    r.push(var, None, p.meta.id, Role::AssignmentTarget);
                }
                r.block_stmts(&f.body.stmts, fs)?;
                function_ranges.insert(f.name.clone(), start..r.out.len());
            }
            Item::Record(_) => {}
        }
    }
    Ok(Occurrences {
        refs: r.out,
        stmt_ranges: r.stmt_ranges,
        header_ranges: r.header_ranges,
        function_ranges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn resolve(src: &str) -> Result<(SyntaxTree, ScopeTree, Occurrences), ResolveError> {
        let t = parse_source("t.mc", src).unwrap();
        let s = build_scope_tree(&t)?;
        let o = resolve_occurrences(&t, &s)?;
        Ok((t, s, o))
    }

    #[test]
    fn example2_has_three_amounts() {
        let (_, s, o) = resolve(corpus::EXAMPLE2).unwrap();
        let amounts: Vec<_> = s.variables_named("amount").collect();
        assert_eq!(amounts.len(), 3);
        let kinds: Vec<ScopeKind> = amounts.iter().map(|v| s.scope(v.scope).kind).collect();
        assert_eq!(kinds, [ScopeKind::Global, ScopeKind::Function, ScopeKind::Block]);
        // Every `::amount` binds to the global one.
        let global = amounts[0].id;
        let t = parse_source("t.mc", corpus::EXAMPLE2).unwrap();
        let mut global_refs = HashSet::new();
        for f in t.functions() {
            for st in &f.body.stmts {
                collect_globals(st, &mut global_refs);
            }
        }
        assert!(!global_refs.is_empty());
        for occ in &o.refs {
            if global_refs.contains(&occ.node) {
                assert_eq!(occ.variable, global);
            }
        }
    }

    fn collect_globals(s: &Stmt, out: &mut HashSet<NodeId>) {
        for e in s.own_exprs() {
            e.walk(&mut |x| {
                if matches!(x.kind, ExprKind::Global(_)) {
                    out.insert(x.meta.id);
                }
            });
        }
        for c in s.child_stmts() {
            collect_globals(c, out);
        }
    }

    #[test]
    fn innermost_binding_wins() {
        let (_, s, o) =
            resolve("int a = 1; void main() { int a = 2; { int a = 3; print(a); print(::a); } print(a); }").unwrap();
        let reads: Vec<usize> = o
            .refs
            .iter()
            .filter(|r| r.role == Role::Read)
            .map(|r| s.scope(s.variable(r.variable).scope).kind as usize)
            .collect();
        assert_eq!(
            reads,
            [
                ScopeKind::Block as usize,
                ScopeKind::Global as usize,
                ScopeKind::Function as usize
            ]
        );
    }

    #[test]
    fn example1_variables_live_in_function_scope() {
        let (_, s, _) = resolve(corpus::EXAMPLE1).unwrap();
        assert_eq!(s.variables.len(), 2);
        assert!(s.variables.iter().all(|v| s.scope(v.scope).kind == ScopeKind::Function));
    }

    #[test]
    fn for_init_shadows_outer() {
        let (_, s, _) = resolve("void main() { int s = 0; for (int s = 1; s < 3; s++) print(s); }").unwrap();
        let ss: Vec<_> = s.variables_named("s").collect();
        assert_eq!(ss.len(), 2);
        assert_eq!(s.scope(ss[1].scope).kind, ScopeKind::ForInit);
    }

    #[test]
    fn declaration_order_matters() {
        let (_, s, o) = resolve("int x; void main() { x = 1; int x; x = 2; }").unwrap();
        let targets: Vec<ScopeId> = o
            .refs
            .iter()
            .filter(|r| r.role == Role::AssignmentTarget)
            .map(|r| s.variable(r.variable).scope)
            .collect();
        assert_eq!(targets[0], s.root);
        assert_ne!(targets[1], s.root);
    }

    #[test]
    fn roles_and_ordinals() {
        let (_, _, o) = resolve("void main() { int a = 1; int b[3]; b[a] += a; a++; }").unwrap();
        let roles: Vec<Role> = o.refs.iter().map(|r| r.role).collect();
        use Role::*;
        assert_eq!(
            roles,
            [
                Declaration,
                AssignmentTarget,
                Declaration,
                AssignmentTarget,
                Read,
                Read,
                AssignmentTarget
            ]
        );
        assert!(o.refs.iter().enumerate().all(|(i, r)| r.ordinal == i));
    }

    #[test]
    fn record_members_are_tracked() {
        let (_, s, o) = resolve("struct p { int x; int y; }; void main() { p q; q.x = 1; q.y = q.x; }").unwrap();
        let q = s.variables_named("q").next().unwrap();
        assert!(q.is_record);
        assert_eq!(q.members, ["x", "y"]);
        let members: Vec<Option<&str>> = o.refs.iter().map(|r| r.member.as_deref()).collect();
        assert_eq!(members, [None, Some("x"), Some("y"), Some("x")]);
        assert!(matches!(
            resolve("struct p { int x; }; void main() { p q; q.z = 1; }"),
            Err(ResolveError::UnresolvedMember { .. })
        ));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            resolve("void main() { z = 1; }"),
            Err(ResolveError::UnresolvedName { name, .. }) if name == "z"
        ));
        assert!(matches!(
            resolve("void main() { int a; int a; }"),
            Err(ResolveError::DuplicateDeclaration { .. })
        ));
        assert!(matches!(
            resolve("void main() { f(); }"),
            Err(ResolveError::UnresolvedName { .. })
        ));
        assert!(matches!(
            resolve("void main() { print(::y); }"),
            Err(ResolveError::UnresolvedName { .. })
        ));
    }

    #[test]
    fn scope_spans_nest() {
        let (_, s, _) = resolve(corpus::EXAMPLE3).unwrap();
        for sc in &s.scopes {
            if let Some(p) = sc.parent {
                assert!(s.scope(p).span.contains(&sc.span));
            }
        }
    }
}
