//! Syntax tree for MiniC.
//!
//! Every node that can be named by later passes carries a [`Meta`] with a
//! unique [`NodeId`] and its [`SourceSpan`]. Structural comparison (ignoring
//! ids and spans) goes through [`SyntaxTree::normalized`].

use serde::Serialize;

use super::token::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Meta {
    pub id: NodeId,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxTree {
    pub file: String,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Record(RecordDef),
    Function(FunctionDef),
    /// A top-level declaration; always a `StmtKind::Decl`.
    Global(Stmt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordDef {
    pub meta: Meta,
    pub name: String,
    pub fields: Vec<Field>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub ty: TypeRef,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseType {
    Int,
    Float,
    Bool,
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeRef {
    pub base: BaseType,
    /// `None` for scalars, `Some(None)` for `[]`, `Some(Some(n))` for `[n]`.
    pub array: Option<Option<u64>>,
}

impl TypeRef {
    pub fn scalar(base: BaseType) -> Self {
        TypeRef { base, array: None }
    }

    pub fn base_name(&self) -> &str {
        match &self.base {
            BaseType::Int => "int",
            BaseType::Float => "float",
            BaseType::Bool => "bool",
            BaseType::Named(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub meta: Meta,
    pub ret: TypeRef,
    pub name: String,
    pub params: Vec<Param>,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub meta: Meta,
    pub ty: TypeRef,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub meta: Meta,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub ty: TypeRef,
    pub name: String,
    pub init: Option<Init>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Init {
    Expr(Expr),
    List(Vec<Expr>),
}

impl Init {
    pub fn exprs(&self) -> &[Expr] {
        match self {
            Init::Expr(e) => std::slice::from_ref(e),
            Init::List(es) => es,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub meta: Meta,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Decl(Decl),
    Expr(Expr),
    If {
        cond: Expr,
        then_branch: Box<Stmt>,
        else_branch: Option<Box<Stmt>>,
    },
    Switch {
        scrutinee: Expr,
        body: SwitchBody,
    },
    While {
        cond: Expr,
        body: Box<Stmt>,
    },
    DoWhile {
        body: Box<Stmt>,
        cond: Expr,
    },
    For {
        init: ForInit,
        cond: Option<Expr>,
        update: Option<Expr>,
        body: Box<Stmt>,
    },
    Return(Option<Expr>),
    Break,
    Continue,
    Goto(String),
    Labeled {
        label: String,
        stmt: Box<Stmt>,
    },
    Block(Block),
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchBody {
    pub meta: Meta,
    pub arms: Vec<SwitchArm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchArm {
    pub label: CaseLabel,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseLabel {
    Case(Literal),
    Default,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForInit {
    None,
    /// Always a `StmtKind::Decl`.
    Decl(Box<Stmt>),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Int(String),
    Float(String),
    Bool(bool),
    /// Raw text including quotes and escapes.
    Str(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub meta: Meta,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompoundOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Literal(Literal),
    Var(String),
    /// `::name`
    Global(String),
    Member {
        base: Box<Expr>,
        field: String,
    },
    Index {
        base: Box<Expr>,
        index: Box<Expr>,
    },
    Call {
        callee: String,
        args: Vec<Expr>,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Assign {
        target: Box<Expr>,
        value: Box<Expr>,
    },
    CompoundAssign {
        op: CompoundOp,
        target: Box<Expr>,
        value: Box<Expr>,
    },
    Increment(Box<Expr>),
    Decrement(Box<Expr>),
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::Neg => "-",
        }
    }
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Rem => "%",
            BinaryOp::Lt => "<",
            BinaryOp::Gt => ">",
            BinaryOp::Le => "<=",
            BinaryOp::Ge => ">=",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::And => "&&",
            BinaryOp::Or => "||",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        use BinaryOp::*;
        Some(match s {
            "+" => Add,
            "-" => Sub,
            "*" => Mul,
            "/" => Div,
            "%" => Rem,
            "<" => Lt,
            ">" => Gt,
            "<=" => Le,
            ">=" => Ge,
            "==" => Eq,
            "!=" => Ne,
            "&&" => And,
            "||" => Or,
            _ => return None,
        })
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        use BinaryOp::*;
        match self {
            Or => 2,
            And => 3,
            Eq | Ne => 4,
            Lt | Gt | Le | Ge => 5,
            Add | Sub => 6,
            Mul | Div | Rem => 7,
        }
    }
}

impl CompoundOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompoundOp::Add => "+=",
            CompoundOp::Sub => "-=",
            CompoundOp::Mul => "*=",
            CompoundOp::Div => "/=",
            CompoundOp::Rem => "%=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "+=" => CompoundOp::Add,
            "-=" => CompoundOp::Sub,
            "*=" => CompoundOp::Mul,
            "/=" => CompoundOp::Div,
            "%=" => CompoundOp::Rem,
            _ => return None,
        })
    }
}

impl Expr {
    /// The operator symbol of this node, if it is an operator node.
    ///
    /// Plain assignment reports `=`; callers that count operators for the
    /// information rules skip it.
    pub fn operator(&self) -> Option<&'static str> {
        match &self.kind {
            ExprKind::Unary { op, .. } => Some(op.symbol()),
            ExprKind::Binary { op, .. } => Some(op.symbol()),
            ExprKind::Assign { .. } => Some("="),
            ExprKind::CompoundAssign { op, .. } => Some(op.symbol()),
            ExprKind::Increment(_) => Some("++"),
            ExprKind::Decrement(_) => Some("--"),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Literal(_) | ExprKind::Var(_) | ExprKind::Global(_) => vec![],
            ExprKind::Member { base, .. } => vec![base],
            ExprKind::Index { base, index } => vec![base, index],
            ExprKind::Call { args, .. } => args.iter().collect(),
            ExprKind::Unary { operand, .. } => vec![operand],
            ExprKind::Binary { lhs, rhs, .. } => vec![lhs, rhs],
            ExprKind::Assign { target, value } | ExprKind::CompoundAssign { target, value, .. } => {
                vec![target, value]
            }
            ExprKind::Increment(t) | ExprKind::Decrement(t) => vec![t],
        }
    }

    pub fn is_assignable(&self) -> bool {
        matches!(
            self.kind,
            ExprKind::Var(_) | ExprKind::Global(_) | ExprKind::Index { .. } | ExprKind::Member { .. }
        )
    }

    /// Pre-order walk over this expression and all sub-expressions.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }
}

impl Stmt {
    /// Expressions owned directly by this statement (not by nested statements),
    /// in source order.
    pub fn own_exprs(&self) -> Vec<&Expr> {
        match &self.kind {
            StmtKind::Decl(d) => d.init.as_ref().map(|i| i.exprs().iter().collect()).unwrap_or_default(),
            StmtKind::Expr(e) => vec![e],
            StmtKind::If { cond, .. } | StmtKind::While { cond, .. } | StmtKind::DoWhile { cond, .. } => {
                vec![cond]
            }
            StmtKind::Switch { scrutinee, .. } => vec![scrutinee],
            StmtKind::For { init, cond, update, .. } => {
                let mut v = Vec::new();
                if let ForInit::Expr(e) = init {
                    v.push(e);
                }
                v.extend(cond.iter());
                v.extend(update.iter());
                v
            }
            StmtKind::Return(e) => e.iter().collect(),
            _ => vec![],
        }
    }

    /// Directly nested statements, in source order.
    pub fn child_stmts(&self) -> Vec<&Stmt> {
        match &self.kind {
            StmtKind::If {
                then_branch,
                else_branch,
                ..
            } => {
                let mut v = vec![then_branch.as_ref()];
                v.extend(else_branch.as_deref());
                v
            }
            StmtKind::Switch { body, .. } => body.arms.iter().flat_map(|a| a.body.iter()).collect(),
            StmtKind::While { body, .. } | StmtKind::DoWhile { body, .. } => vec![body],
            StmtKind::For { init, body, .. } => {
                let mut v = Vec::new();
                if let ForInit::Decl(d) = init {
                    v.push(d.as_ref());
                }
                v.push(body);
                v
            }
            StmtKind::Labeled { stmt, .. } => vec![stmt],
            StmtKind::Block(b) => b.stmts.iter().collect(),
            _ => vec![],
        }
    }
}

impl Expr {
    /// Pre-order mutable walk.
    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut Expr)) {
        f(self);
        match &mut self.kind {
            ExprKind::Literal(_) | ExprKind::Var(_) | ExprKind::Global(_) => {}
            ExprKind::Member { base, .. } => base.walk_mut(f),
            ExprKind::Index { base, index } => {
                base.walk_mut(f);
                index.walk_mut(f);
            }
            ExprKind::Call { args, .. } => args.iter_mut().for_each(|a| a.walk_mut(f)),
            ExprKind::Unary { operand, .. } => operand.walk_mut(f),
            ExprKind::Binary { lhs, rhs, .. } => {
                lhs.walk_mut(f);
                rhs.walk_mut(f);
            }
            ExprKind::Assign { target, value } | ExprKind::CompoundAssign { target, value, .. } => {
                target.walk_mut(f);
                value.walk_mut(f);
            }
            ExprKind::Increment(t) | ExprKind::Decrement(t) => t.walk_mut(f),
        }
    }
}

impl Stmt {
    /// Pre-order mutable walk over this statement, its nested statements and
    /// every expression they own.
    pub fn walk_mut(&mut self, fs: &mut impl FnMut(&mut Stmt), fe: &mut impl FnMut(&mut Expr)) {
        fs(self);
        match &mut self.kind {
            StmtKind::Decl(d) => match &mut d.init {
                Some(Init::Expr(e)) => e.walk_mut(fe),
                Some(Init::List(es)) => es.iter_mut().for_each(|e| e.walk_mut(fe)),
                None => {}
            },
            StmtKind::Expr(e) => e.walk_mut(fe),
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                cond.walk_mut(fe);
                then_branch.walk_mut(fs, fe);
                if let Some(e) = else_branch {
                    e.walk_mut(fs, fe);
                }
            }
            StmtKind::Switch { scrutinee, body } => {
                scrutinee.walk_mut(fe);
                for arm in &mut body.arms {
                    arm.body.iter_mut().for_each(|s| s.walk_mut(fs, fe));
                }
            }
            StmtKind::While { cond, body } => {
                cond.walk_mut(fe);
                body.walk_mut(fs, fe);
            }
            StmtKind::DoWhile { body, cond } => {
                body.walk_mut(fs, fe);
                cond.walk_mut(fe);
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                match init {
                    ForInit::Decl(d) => d.walk_mut(fs, fe),
                    ForInit::Expr(e) => e.walk_mut(fe),
                    ForInit::None => {}
                }
                if let Some(c) = cond {
                    c.walk_mut(fe);
                }
                if let Some(u) = update {
                    u.walk_mut(fe);
                }
                body.walk_mut(fs, fe);
            }
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    e.walk_mut(fe);
                }
            }
            StmtKind::Labeled { stmt, .. } => stmt.walk_mut(fs, fe),
            StmtKind::Block(b) => b.stmts.iter_mut().for_each(|s| s.walk_mut(fs, fe)),
            StmtKind::Break | StmtKind::Continue | StmtKind::Goto(_) | StmtKind::Empty => {}
        }
    }
}

impl SyntaxTree {
    pub fn functions(&self) -> impl Iterator<Item = &FunctionDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Function(f) => Some(f),
            _ => None,
        })
    }

    pub fn function(&self, name: &str) -> Option<&FunctionDef> {
        self.functions().find(|f| f.name == name)
    }

    pub fn records(&self) -> impl Iterator<Item = &RecordDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Record(r) => Some(r),
            _ => None,
        })
    }

    /// A copy with every id and span reset, for structural comparison.
    pub fn normalized(&self) -> SyntaxTree {
        let mut t = self.clone();
        t.file.clear();
        for item in &mut t.items {
            match item {
                Item::Record(r) => r.meta = Meta::default(),
                Item::Function(f) => {
                    f.meta = Meta::default();
                    f.params.iter_mut().for_each(|p| p.meta = Meta::default());
                    normalize_block(&mut f.body);
                }
                Item::Global(s) => normalize_stmt(s),
            }
        }
        t
    }

    pub fn structurally_eq(&self, other: &SyntaxTree) -> bool {
        self.normalized() == other.normalized()
    }
}

fn normalize_block(b: &mut Block) {
    b.meta = Meta::default();
    b.stmts.iter_mut().for_each(normalize_stmt);
}

fn normalize_stmt(s: &mut Stmt) {
    s.meta = Meta::default();
    match &mut s.kind {
        StmtKind::Decl(d) => normalize_decl(d),
        StmtKind::Expr(e) => normalize_expr(e),
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            normalize_expr(cond);
            normalize_stmt(then_branch);
            if let Some(e) = else_branch {
                normalize_stmt(e);
            }
        }
        StmtKind::Switch { scrutinee, body } => {
            normalize_expr(scrutinee);
            body.meta = Meta::default();
            for arm in &mut body.arms {
                arm.body.iter_mut().for_each(normalize_stmt);
            }
        }
        StmtKind::While { cond, body } | StmtKind::DoWhile { body, cond } => {
            normalize_expr(cond);
            normalize_stmt(body);
        }
        StmtKind::For {
            init,
            cond,
            update,
            body,
        } => {
            match init {
                ForInit::Decl(d) => normalize_stmt(d),
                ForInit::Expr(e) => normalize_expr(e),
                ForInit::None => {}
            }
            cond.iter_mut().for_each(normalize_expr);
            update.iter_mut().for_each(normalize_expr);
            normalize_stmt(body);
        }
        StmtKind::Return(e) => e.iter_mut().for_each(normalize_expr),
        StmtKind::Labeled { stmt, .. } => normalize_stmt(stmt),
        StmtKind::Block(b) => normalize_block(b),
        StmtKind::Break | StmtKind::Continue | StmtKind::Goto(_) | StmtKind::Empty => {}
    }
}

fn normalize_decl(d: &mut Decl) {
    match &mut d.init {
        Some(Init::Expr(e)) => normalize_expr(e),
        Some(Init::List(es)) => es.iter_mut().for_each(normalize_expr),
        None => {}
    }
}

fn normalize_expr(e: &mut Expr) {
    e.meta = Meta::default();
    match &mut e.kind {
        ExprKind::Literal(_) | ExprKind::Var(_) | ExprKind::Global(_) => {}
        ExprKind::Member { base, .. } => normalize_expr(base),
        ExprKind::Index { base, index } => {
            normalize_expr(base);
            normalize_expr(index);
        }
        ExprKind::Call { args, .. } => args.iter_mut().for_each(normalize_expr),
        ExprKind::Unary { operand, .. } => normalize_expr(operand),
        ExprKind::Binary { lhs, rhs, .. } => {
            normalize_expr(lhs);
            normalize_expr(rhs);
        }
        ExprKind::Assign { target, value } | ExprKind::CompoundAssign { target, value, .. } => {
            normalize_expr(target);
            normalize_expr(value);
        }
        ExprKind::Increment(t) | ExprKind::Decrement(t) => normalize_expr(t),
    }
}
